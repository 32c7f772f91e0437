use std::fmt;

/// An operator on `⊕_n B(n)` built from the four δ's.
///
/// `Compose` applies right to left; `Ad(j, ξ)` is `δ_j ∘ ξ − ξ ∘ δ_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OpExpr {
    Base(u8),
    Sum(Vec<OpExpr>),
    Compose(Vec<OpExpr>),
    Ad(u8, Box<OpExpr>),
}

impl OpExpr {
    /// A chain `δ_{i_1} ∘ … ∘ δ_{i_k}` (so `δ_{i_k}` acts first).
    pub fn chain(indices: &[u8]) -> OpExpr {
        OpExpr::Compose(indices.iter().map(|&j| OpExpr::Base(j)).collect())
    }

    pub fn ad(j: u8, inner: OpExpr) -> OpExpr {
        OpExpr::Ad(j, Box::new(inner))
    }

    /// `(Ad_{δ_j})^k (inner)`.
    pub fn ad_pow(j: u8, k: usize, inner: OpExpr) -> OpExpr {
        (0..k).fold(inner, |acc, _| OpExpr::ad(j, acc))
    }

    pub fn then(self, first: OpExpr) -> OpExpr {
        OpExpr::Compose(vec![self, first])
    }

    /// How many levels the operator lowers an element by. Sums are assumed
    /// homogeneous; an empty sum drops nothing.
    pub fn level_drop(&self) -> u32 {
        match self {
            OpExpr::Base(_) => 1,
            OpExpr::Sum(parts) => parts.first().map_or(0, OpExpr::level_drop),
            OpExpr::Compose(parts) => parts.iter().map(OpExpr::level_drop).sum(),
            OpExpr::Ad(_, inner) => 1 + inner.level_drop(),
        }
    }

    /// True when every summand lowers the level by the same amount.
    pub fn is_homogeneous(&self) -> bool {
        match self {
            OpExpr::Base(j) => *j <= 3,
            OpExpr::Sum(parts) => {
                parts.iter().all(OpExpr::is_homogeneous)
                    && parts
                        .windows(2)
                        .all(|w| w[0].level_drop() == w[1].level_drop())
            }
            OpExpr::Compose(parts) => parts.iter().all(OpExpr::is_homogeneous),
            OpExpr::Ad(j, inner) => *j <= 3 && inner.is_homogeneous(),
        }
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpExpr::Sum(parts) if parts.len() > 1 => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpExpr::Base(j) => write!(f, "d{j}"),
            OpExpr::Sum(parts) if parts.is_empty() => write!(f, "0"),
            OpExpr::Sum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            OpExpr::Compose(parts) if parts.is_empty() => write!(f, "id"),
            OpExpr::Compose(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "∘")?;
                    }
                    p.fmt_factor(f)?;
                }
                Ok(())
            }
            OpExpr::Ad(j, inner) => write!(f, "Ad(d{j}, {inner})"),
        }
    }
}

/// `Σ δ_{i_1} ∘ … ∘ δ_{i_k}` over all tuples from `alphabet` with
/// `i_1 + … + i_k = r`, in lexicographic order. A negative `r` gives the
/// empty sum; `k = 0, r = 0` gives the identity.
pub fn sum_over_chains(k: usize, r: i64, alphabet: &[u8]) -> OpExpr {
    let mut alphabet = alphabet.to_vec();
    alphabet.sort_unstable();
    alphabet.dedup();
    let mut chains = Vec::new();
    if r >= 0 {
        let mut current = Vec::with_capacity(k);
        enumerate(k, r, &alphabet, &mut current, &mut chains);
    }
    OpExpr::Sum(chains)
}

fn enumerate(k: usize, remaining: i64, alphabet: &[u8], cur: &mut Vec<u8>, out: &mut Vec<OpExpr>) {
    if cur.len() == k {
        if remaining == 0 {
            out.push(OpExpr::chain(cur));
        }
        return;
    }
    let max = alphabet.last().copied().unwrap_or(0) as i64;
    let slots_after = (k - cur.len() - 1) as i64;
    for &j in alphabet {
        let left = remaining - j as i64;
        if left < 0 || left > max * slots_after {
            continue;
        }
        cur.push(j);
        enumerate(k, left, alphabet, cur, out);
        cur.pop();
    }
}
