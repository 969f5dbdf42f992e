#pragma once

// Named constants for every asymptotic bound used by the pipeline.

namespace mcid {

struct Constants {
  double c_vis = 40.0;       // visits needed for the censored chain to mix
  double c_hist = 4.0;       // histogram cap sample size
  double c_len = 24.0;       // trajectory budget
  double c_round = 4.0;      // cut rounding approximation factor per ln d
  double c2 = 1.0 / 64.0;    // component conductance floor
  double c3 = 1.0 / 64.0;    // tail escape floor
  double c_iid = 16.0;       // iid tester sample size
  double c_bourgain = 8.0;   // embedding repetitions per ln |I|
  double c_tail_len = 64.0;  // tail escape trajectory length
  double c_tail_escape = 1.0 / 32.0;

  bool operator==(const Constants&) const = default;
};

}  // namespace mcid
