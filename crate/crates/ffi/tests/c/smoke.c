#include <stdio.h>
#include <string.h>
#include "segre.h"

int main(void) {
    SegreOptions opts = segre_options_default();
    SegreEngine *engine = segre_engine_new(&opts);
    if (!engine) return 10;
    SegrePoly *poly = NULL;
    if (segre_integral(engine, 2, &poly) != SEGRE_STATUS_OK) return 11;
    char *text = NULL;
    if (segre_poly_to_string(poly, &text) != SEGRE_STATUS_OK) return 12;
    printf("%s\n", text);
    int bad = strcmp(text, "-1/2*d^2 + 3/2*d") != 0 || !segre_poly_divisible_by_d_minus_3(poly);
    segre_string_free(text);
    segre_poly_free(poly);
    segre_engine_free(engine);
    bool passed = false;
    if (segre_check_main_theorem(2, 4, 3, &passed) != SEGRE_STATUS_OK || !passed) return 13;
    if (segre_integral(NULL, 1, &poly) != SEGRE_STATUS_NULL_POINTER) return 14;
    if (segre_last_error_message() == NULL) return 15;
    return bad;
}
