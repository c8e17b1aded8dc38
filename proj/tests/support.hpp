#pragma once

#include "scenekit/pose/transform.hpp"
#include "scenekit/rng.hpp"

#include <cmath>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace scenekit::test {

inline Vec3 random_unit_vector(CounterRng& rng) {
    // Marsaglia: uniform on the sphere.
    double z = rng.uniform(-1.0, 1.0);
    double phi = rng.uniform(0.0, 6.283185307179586);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

inline Quat random_rotation(CounterRng& rng) {
    return exp_so3(rng.uniform(0.0, 3.141592653589793) * random_unit_vector(rng));
}

inline RigidTransform random_rigid(CounterRng& rng, double translation_range = 100.0) {
    return {random_rotation(rng),
            {rng.uniform(-translation_range, translation_range),
             rng.uniform(-translation_range, translation_range),
             rng.uniform(-translation_range, translation_range)}};
}

inline Sim3Transform random_sim3(CounterRng& rng, double translation_range = 100.0,
                                 double scale_lo = 0.5, double scale_hi = 2.0) {
    Sim3Transform T;
    T.q = random_rotation(rng);
    T.t = {rng.uniform(-translation_range, translation_range),
           rng.uniform(-translation_range, translation_range),
           rng.uniform(-translation_range, translation_range)};
    T.sigma = rng.uniform(scale_lo, scale_hi);
    return T;
}

// Unique scratch directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("scenekit_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

} // namespace scenekit::test
