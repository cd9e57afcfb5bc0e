#pragma once

#include <map>
#include <string>
#include <utility>

#include "isogrow/bjorling.hpp"
#include "isogrow/growth.hpp"

namespace testing_support {

// Grown surfaces are cached per (name, eps, h) within one test binary.
inline const isogrow::GrowthResult& grown(const std::string& name, double eps, double h = 0.3) {
    static std::map<std::pair<std::string, std::pair<double, double>>, isogrow::GrowthResult> cache;
    auto key = std::make_pair(name, std::make_pair(eps, h));
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto data = isogrow::bjorling_catalog(name, 1.0);
        auto cd = isogrow::derive_cauchy_data(data);
        it = cache.emplace(key, isogrow::grow(isogrow::sample_initial_strip(cd, data, eps), h)).first;
    }
    return it->second;
}

inline isogrow::Point3 full_position(const isogrow::DiscreteSurface& s, isogrow::LatticeIndex i) {
    isogrow::Point3L p = s.positions.at(i).cast<long double>();
    if (s.residual.has(i)) p += s.residual.at(i).cast<long double>();
    return p.cast<double>();
}

}  // namespace testing_support
