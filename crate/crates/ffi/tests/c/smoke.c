#include <math.h>
#include <stdio.h>
#include "polydual.h"

int main(void) {
    PdPolytope *p = NULL;
    PdPolytope *q = NULL;
    double g = 0.0, c = 0.0, vol = 0.0;

    if (pd_polytope_generate("hexagon", 2, 0.25, &p) != PD_STATUS_OK) return 1;
    if (pd_invariant_g(p, &g, &c) != PD_STATUS_OK) return 2;
    if (fabs(g - 0.8215838362577493) > 1e-9) return 3;
    if (pd_polytope_polar(p, &q) != PD_STATUS_OK) return 4;
    if (pd_polytope_volume(q, &vol) != PD_STATUS_OK) return 5;
    if (fabs(vol - 3.5 / sqrt(1.0 - 0.0625)) > 1e-12) return 6;

    double tri[] = {1.0, 0.0, -1.0, 1.0, -1.0, -1.0};
    PdPolytope *t = NULL;
    if (pd_polytope_new(2, tri, 3, &t) != PD_STATUS_OK) return 7;
    if (pd_invariant_g(t, &g, NULL) != PD_STATUS_SYMMETRY_REQUIRED) return 8;
    printf("%s\n", pd_last_error_message());

    pd_polytope_free(t);
    pd_polytope_free(q);
    pd_polytope_free(p);
    printf("ok %s\n", pd_version());
    return 0;
}
