#include "ultrarelax/schedule.hpp"

#include <cmath>
#include <string>

#include "ultrarelax/errors.hpp"

namespace ultrarelax {

TemperatureSchedule::TemperatureSchedule(double start_temp_k, double start_time_s)
    : start_temp_k_(start_temp_k), start_time_s_(start_time_s) {
  if (!(start_temp_k > 0.0))
    throw ConfigError("schedule: start temperature must be positive");
}

double TemperatureSchedule::end_time() const {
  return segments_.empty() ? start_time_s_ : segments_.back().t_end;
}

double TemperatureSchedule::final_temperature() const {
  return segments_.empty() ? start_temp_k_ : segment_value(segments_.back(), segments_.back().t_end);
}

TemperatureSchedule& TemperatureSchedule::hold_until(double t_end_s) {
  if (t_end_s <= end_time()) throw ConfigError("schedule: segments must advance in time");
  segments_.push_back(Segment{end_time(), t_end_s, final_temperature(), Shape::hold, 0.0, 0.0});
  return *this;
}

TemperatureSchedule& TemperatureSchedule::linear_to(double target_k, double t_end_s) {
  if (t_end_s <= end_time()) throw ConfigError("schedule: segments must advance in time");
  if (!(target_k > 0.0)) throw ConfigError("schedule: target temperature must be positive");
  segments_.push_back(Segment{end_time(), t_end_s, final_temperature(), Shape::linear, target_k, 0.0});
  return *this;
}

TemperatureSchedule& TemperatureSchedule::exp_approach_to(double target_k, double tau_s, double t_end_s) {
  if (t_end_s <= end_time()) throw ConfigError("schedule: segments must advance in time");
  if (!(target_k > 0.0)) throw ConfigError("schedule: target temperature must be positive");
  if (!(tau_s > 0.0)) throw ConfigError("schedule: approach time constant must be positive");
  segments_.push_back(Segment{end_time(), t_end_s, final_temperature(), Shape::exp_approach, target_k, tau_s});
  return *this;
}

double TemperatureSchedule::segment_value(const Segment& seg, double t_s) const {
  switch (seg.shape) {
    case Shape::hold:
      return seg.temp_start_k;
    case Shape::linear: {
      const double frac = (t_s - seg.t_start) / (seg.t_end - seg.t_start);
      return seg.temp_start_k + (seg.target_k - seg.temp_start_k) * frac;
    }
    case Shape::exp_approach:
      return seg.target_k + (seg.temp_start_k - seg.target_k) * std::exp(-(t_s - seg.t_start) / seg.tau_s);
  }
  throw ConfigError("schedule: unknown segment shape");
}

double TemperatureSchedule::temperature_at(double t_s) const {
  if (segments_.empty() || t_s <= start_time_s_) return start_temp_k_;
  for (const auto& seg : segments_)
    if (t_s < seg.t_end) return segment_value(seg, t_s);
  return final_temperature();
}

std::vector<double> TemperatureSchedule::breakpoints() const {
  std::vector<double> pts{start_time_s_};
  for (const auto& seg : segments_) pts.push_back(seg.t_end);
  return pts;
}

}  // namespace ultrarelax
