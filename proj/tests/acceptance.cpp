// Runs the full acceptance suite at seed 1, c = 0.5 and prints one line per
// criterion. Exit status is nonzero when any criterion fails.
#include <cstdio>

#include "rlp/rlp.h"

int main() {
  rlp_verify_options o = rlp_verify_default_options();
  o.seed = 1;
  o.c = 0.5;
  rlp_report* r = nullptr;
  if (rlp_verify_run(&o, &r) != RLP_OK) {
    std::fprintf(stderr, "verify failed to run: %s\n", rlp_last_error());
    return 2;
  }
  const size_t n = rlp_report_check_count(r);
  size_t failed = 0;
  for (size_t i = 0; i < n; ++i) {
    rlp_check_info c;
    rlp_report_check(r, i, &c);
    std::printf("criterion %2d: %s  %s  statistic %.6g (required %s %.6g)%s%s\n", c.id,
                c.pass ? "PASS" : "FAIL", c.anchor, c.statistic, c.comparison, c.threshold,
                c.error[0] ? "  error: " : "", c.error);
    failed += !c.pass;
  }
  std::printf("%zu of %zu criteria passed\n", n - failed, n);
  rlp_report_free(r);
  return failed ? 1 : 0;
}
