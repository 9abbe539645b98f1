#ifndef SLOWBOND_PROFILES_HPP
#define SLOWBOND_PROFILES_HPP

#include <functional>
#include <string>
#include <vector>

namespace slowbond {

/// Named initial profiles on [0,1):
///   constant   -> c
///   halfcos    -> (1 + cos(pi u)) / 2   (jump across the slow bond: 1 vs 0)
///   cos2pi     -> cos(2 pi u)           (degenerate: satisfies every regime's BCs)
///   step       -> 1 on [0, 1/2), 0 on [1/2, 1)
///   linear-saw -> u
std::function<double(double)> make_profile(const std::string& name, double c = 0.5);

const std::vector<std::string>& profile_names();

}  // namespace slowbond

#endif
