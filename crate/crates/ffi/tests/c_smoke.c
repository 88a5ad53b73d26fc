#include <math.h>
#include <stdio.h>
#include <string.h>

#include "bergman_muntz.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    BmComplex z = {5.0, 0.0}, out;
    CHECK(bm_cgamma(z, &out) == BM_STATUS_OK);
    CHECK(fabs(out.re - 24.0) < 1e-12);

    BmComplex pole = {0.0, 0.0};
    CHECK(bm_cgamma(pole, &out) == BM_STATUS_POLE);
    CHECK(bm_last_error_message() != NULL);

    BmComplex one = {1.0, 0.0};
    CHECK(bm_m2_kernel(one, one, &out) == BM_STATUS_OK);
    CHECK(fabs(out.re - 1.0 / (8.0 * M_PI)) < 1e-15);

    BmDiskFunction *f = NULL;
    CHECK(bm_disk_function_from_json("[{\"lambda\": [2, 0], \"coeff\": [1, 0]}]", &f) == BM_STATUS_OK);
    BmComplex three = {3.0, 0.0};
    CHECK(bm_mb_transform_eval(f, three, &out) == BM_STATUS_OK);
    CHECK(fabs(out.re - 2.0) < 1e-12);
    bm_disk_function_free(f);

    BmSequence *s = NULL;
    CHECK(bm_sequence_from_json("{\"rule\": {\"kind\": \"arith\", \"params\": {\"a\": 3}, \"r_max\": 1e4}}", &s) == BM_STATUS_OK);
    BmVerdict v;
    CHECK(bm_sequence_verdict(s, 1.0, &v) == BM_STATUS_OK);
    CHECK(v == BM_VERDICT_ZERO_SET_SUFFICIENT_DENSITY);
    char *json = NULL;
    CHECK(bm_sequence_report_json(s, 1.0, &json) == BM_STATUS_OK);
    CHECK(strstr(json, "ZeroSetSufficientDensity") != NULL);
    bm_string_free(json);
    bm_sequence_free(s);

    printf("ok %s\n", bm_version());
    return 0;
}
