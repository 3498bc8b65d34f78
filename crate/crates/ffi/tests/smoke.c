#include <math.h>
#include <stdio.h>
#include <string.h>

#include "nsbounds.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  NsbGeometry *g = NULL;
  CHECK(nsb_geometry_new(1.0, 0.8, 0.8, 0.8, 3.1, &g) == NSB_STATUS_OK);
  bool conda = false;
  CHECK(nsb_geometry_conda(g, &conda) == NSB_STATUS_OK && conda);

  NsbCertificate *c = NULL;
  CHECK(nsb_certify_analytic(g, 1.0, 0.0, &c) == NSB_STATUS_OK);
  NsbCertificateValues v;
  CHECK(nsb_certificate_values(c, &v) == NSB_STATUS_OK);
  CHECK(v.certified && v.phi == 0.0 && v.threshold > 0.0 && !isnan(v.grad_bound_sharp));

  char *json = NULL;
  CHECK(nsb_certificate_to_json(c, &json) == NSB_STATUS_OK);
  CHECK(strstr(json, "\"status\": \"Certified\"") != NULL);
  nsb_string_free(json);
  nsb_certificate_free(c);

  NsbForceBounds f;
  CHECK(nsb_forces(g, 1.0, 1e-8, false, &f) == NSB_STATUS_OK);
  CHECK(f.certified && f.drag_bound == f.psi && f.lift_bound == f.psi && f.psi > 0.0);

  NsbGeometry *bad = NULL;
  CHECK(nsb_geometry_new(1.0, 0.8, 0.7, 0.7, 1.0, &bad) == NSB_STATUS_OK);
  CHECK(nsb_forces(bad, 1.0, 0.0, false, &f) == NSB_STATUS_NON_CUBIC_BOX);
  CHECK(nsb_last_error() != NULL && strstr(nsb_last_error(), "cubic") != NULL);
  nsb_geometry_free(bad);

  CHECK(nsb_certify_analytic(NULL, 1.0, 0.0, &c) == NSB_STATUS_NULL_POINTER);
  nsb_geometry_free(g);
  printf("ok %s\n", nsb_version());
  return 0;
}
