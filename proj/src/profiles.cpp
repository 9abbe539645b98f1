#include "slowbond/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace slowbond {

std::function<double(double)> make_profile(const std::string& name, double c) {
  const double pi = std::acos(-1.0);
  if (name == "constant") return [c](double) { return c; };
  if (name == "halfcos") return [pi](double u) { return 0.5 * (1.0 + std::cos(pi * u)); };
  if (name == "cos2pi") return [pi](double u) { return std::cos(2.0 * pi * u); };
  if (name == "step") return [](double u) { return u < 0.5 ? 1.0 : 0.0; };
  if (name == "linear-saw") return [](double u) { return u; };
  throw std::invalid_argument("unknown profile '" + name + "'");
}

const std::vector<std::string>& profile_names() {
  static const std::vector<std::string> names = {"constant", "halfcos", "cos2pi", "step",
                                                 "linear-saw"};
  return names;
}

}  // namespace slowbond
