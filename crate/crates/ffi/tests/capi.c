#include <math.h>
#include <stdio.h>
#include "optrelay.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  double v = 0.0;
  CHECK(optrelay_mean_feedback_load(2.0, 1.0, 1.0, &v) == OPTRELAY_STATUS_OK);
  CHECK(fabs(v - 4.913478794) < 1e-8);

  OptrelayEvaluator *ev = NULL;
  CHECK(optrelay_evaluator_new(OPTRELAY_LAW_GAMMA_OPT, 1.0, 1.0, 0.0, 0.0, &ev) == OPTRELAY_STATUS_OK);
  CHECK(optrelay_evaluator_cdf(ev, sqrt(2.0), &v) == OPTRELAY_STATUS_OK);
  CHECK(fabs(v - 0.680689933694383) < 1e-12);
  optrelay_evaluator_free(ev);

  CHECK(optrelay_evaluator_new(OPTRELAY_LAW_GAMMA_OPT, -1.0, 1.0, 0.0, 0.0, &ev) == OPTRELAY_STATUS_PARAMETER);
  char msg[256];
  CHECK(optrelay_last_error(msg, sizeof msg) > 0);

  OptrelayPolicy pol[2] = {{OPTRELAY_POLICY_KIND_OPTIMUM, 0.0}, {OPTRELAY_POLICY_KIND_THRESHOLD_FEEDBACK, 2.0}};
  OptrelayBatch *b = NULL;
  CHECK(optrelay_batch_run(1.0, 1.0, 0.0, pol, 2, 100, 7, &b) == OPTRELAY_STATUS_OK);
  size_t n = 0;
  CHECK(optrelay_batch_len(b, &n) == OPTRELAY_STATUS_OK && n == 100);
  CHECK(optrelay_batch_gamma(b, 0, 0, &v) == OPTRELAY_STATUS_OK && v >= 1.0);
  CHECK(optrelay_batch_gamma(b, 100, 0, &v) == OPTRELAY_STATUS_OUT_OF_RANGE);
  optrelay_batch_free(b);
  puts("ok");
  return 0;
}
