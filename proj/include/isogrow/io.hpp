#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isogrow/bjorling.hpp"
#include "isogrow/lattice.hpp"

namespace isogrow {

// Header "# isogrow-lattice eps r h", then "# vi m n" before every "v" line (row-major, n outer),
// then one "f" record per complete quad with vertices in elementary-square order.
std::string obj_text(const DiscreteSurface& surface);
void write_obj(const DiscreteSurface& surface, const std::string& path);
// Reads files produced by write_obj. Throws Io or Config.
DiscreteSurface read_obj(const std::string& path);

void write_file(const std::string& path, const std::string& text);

// TOML subset: [section] headers, key = value with numbers, "strings", true/false and flat [arrays]; # comments.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::optional<std::string> str(const std::string& section, const std::string& key) const;
    std::optional<double> num(const std::string& section, const std::string& key) const;
    std::optional<std::vector<double>> nums(const std::string& section, const std::string& key) const;

private:
    struct Value {
        std::string scalar;
        std::vector<std::string> items;
        bool is_array = false;
        bool quoted = false;
    };
    std::map<std::string, Value> values_;  // "section.key"
};

// [surface] keys fx_poly, fx_trig (flat w,a,b triples), likewise fy, fz and gx, gy, gz for the normal field.
UserCurve user_curve_from_config(const Config& cfg, double r);

}  // namespace isogrow
