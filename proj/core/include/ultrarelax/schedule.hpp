#pragma once

#include <vector>

namespace ultrarelax {

// Piecewise temperature protocol T(t). Segments are appended in time order
// and each one starts from the value the previous segment actually reached,
// so T is continuous at every boundary by construction (exactly, in floating
// point). Before the start time and after the last segment the temperature
// holds its boundary value.
//
// Shapes:
//   hold          T(t) = T_start
//   linear        T(t) ramps to target_k, reached at t_end
//   exp_approach  T(t) = target_k + (T_start - target_k) exp(-(t-t_start)/tau_s)
class TemperatureSchedule {
 public:
  enum class Shape { hold, linear, exp_approach };

  struct Segment {
    double t_start = 0.0;
    double t_end = 0.0;
    double temp_start_k = 0.0;  // derived: value entering the segment
    Shape shape = Shape::hold;
    double target_k = 0.0;      // unused for hold
    double tau_s = 0.0;         // exp_approach only
  };

  // Constant protocol at start_temp_k from start_time_s onward.
  explicit TemperatureSchedule(double start_temp_k, double start_time_s = 0.0);

  TemperatureSchedule& hold_until(double t_end_s);
  TemperatureSchedule& linear_to(double target_k, double t_end_s);
  TemperatureSchedule& exp_approach_to(double target_k, double tau_s, double t_end_s);

  double temperature_at(double t_s) const;

  // Start time plus every segment boundary; quadrature splits here.
  std::vector<double> breakpoints() const;

  double start_time() const { return start_time_s_; }
  double start_temperature() const { return start_temp_k_; }
  // End of the last segment (start time if there are none).
  double end_time() const;
  // Value held after the last segment.
  double final_temperature() const;

  const std::vector<Segment>& segments() const { return segments_; }

 private:
  double segment_value(const Segment& seg, double t_s) const;

  double start_temp_k_;
  double start_time_s_;
  std::vector<Segment> segments_;
};

}  // namespace ultrarelax
