#include "isogrow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "isogrow/error.hpp"

namespace isogrow {

namespace {

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Point3 full_position(const DiscreteSurface& s, LatticeIndex i) {
    Point3L p = s.positions.at(i).cast<long double>();
    if (s.residual.has(i)) p += s.residual.at(i).cast<long double>();
    return p.cast<double>();
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::Config, what + ": not a number: '" + s + "'");
    }
}

}  // namespace

std::string obj_text(const DiscreteSurface& s) {
    std::string out = "# isogrow-lattice " + fmt("%.17g", s.eps) + " " + fmt("%.17g", s.spec.r) + " " +
                      fmt("%.17g", s.spec.h) + "\n";
    std::unordered_map<long long, std::size_t> id;
    auto key = [](LatticeIndex i) { return (long long)i.m * 1000003LL + i.n; };
    std::size_t next = 1;
    char buf[160];
    s.positions.for_each([&](LatticeIndex i, const Point3&) {
        Point3 p = full_position(s, i);
        std::snprintf(buf, sizeof buf, "# vi %d %d\nv %.17g %.17g %.17g\n", i.m, i.n, p.x(), p.y(), p.z());
        out += buf;
        id[key(i)] = next++;
    });
    for (LatticeIndex c : s.complete_quads()) {
        auto sq = elementary_square(c);
        std::snprintf(buf, sizeof buf, "f %zu %zu %zu %zu\n", id[key(sq[0])], id[key(sq[1])], id[key(sq[2])],
                      id[key(sq[3])]);
        out += buf;
    }
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    bool ok = std::fwrite(text.data(), 1, text.size(), fp) == text.size();
    ok = (std::fclose(fp) == 0) && ok;
    if (!ok) throw Error(ErrorCode::Io, "failed writing " + path);
}

void write_obj(const DiscreteSurface& surface, const std::string& path) { write_file(path, obj_text(surface)); }

DiscreteSurface read_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::string line;
    std::optional<DiscreteSurface> s;
    std::optional<LatticeIndex> pending;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "#") {
            std::string kind;
            ls >> kind;
            if (kind == "isogrow-lattice") {
                double eps, r, h;
                if (!(ls >> eps >> r >> h)) throw Error(ErrorCode::Config, path + ": malformed lattice header");
                s.emplace(DomainSpec::make(r, h, eps));
            } else if (kind == "vi") {
                LatticeIndex i;
                if (!(ls >> i.m >> i.n)) throw Error(ErrorCode::Config, path + ": malformed index comment");
                pending = i;
            }
        } else if (tag == "v") {
            if (!s || !pending)
                throw Error(ErrorCode::Config, path + ":" + std::to_string(lineno) + ": vertex without lattice index");
            Point3 p;
            if (!(ls >> p.x() >> p.y() >> p.z())) throw Error(ErrorCode::Config, path + ": malformed vertex");
            s->set(*pending, p);
            pending.reset();
        }
    }
    if (!s) throw Error(ErrorCode::Config, path + ": missing '# isogrow-lattice' header");
    return *s;
}

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments outside quotes
        bool q = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') q = !q;
            if (line[i] == '#' && !q) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        std::string where = "config line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw Error(ErrorCode::Config, where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::Config, where + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), raw = trim(line.substr(eq + 1));
        if (key.empty() || raw.empty()) throw Error(ErrorCode::Config, where + ": empty key or value");
        Value v;
        if (raw.front() == '[') {
            if (raw.back() != ']') throw Error(ErrorCode::Config, where + ": unterminated array");
            v.is_array = true;
            std::istringstream items(raw.substr(1, raw.size() - 2));
            std::string item;
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (!item.empty()) v.items.push_back(item);
            }
        } else if (raw.front() == '"') {
            if (raw.size() < 2 || raw.back() != '"') throw Error(ErrorCode::Config, where + ": unterminated string");
            v.scalar = raw.substr(1, raw.size() - 2);
            v.quoted = true;
        } else {
            v.scalar = raw;
        }
        cfg.values_[section + "." + key] = v;
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Config, "cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
}

std::optional<std::string> Config::str(const std::string& section, const std::string& key) const {
    auto it = values_.find(section + "." + key);
    if (it == values_.end()) return std::nullopt;
    if (it->second.is_array) throw Error(ErrorCode::Config, section + "." + key + ": expected a scalar");
    return it->second.scalar;
}

std::optional<double> Config::num(const std::string& section, const std::string& key) const {
    auto s = str(section, key);
    if (!s) return std::nullopt;
    return to_number(*s, section + "." + key);
}

std::optional<std::vector<double>> Config::nums(const std::string& section, const std::string& key) const {
    auto it = values_.find(section + "." + key);
    if (it == values_.end()) return std::nullopt;
    std::vector<double> out;
    if (!it->second.is_array) {
        out.push_back(to_number(it->second.scalar, section + "." + key));
        return out;
    }
    for (const auto& item : it->second.items) out.push_back(to_number(item, section + "." + key));
    return out;
}

UserCurve user_curve_from_config(const Config& cfg, double r) {
    UserCurve uc;
    uc.r = r;
    const char* axes[3] = {"x", "y", "z"};
    auto series = [&](const std::string& prefix) {
        Series s;
        if (auto p = cfg.nums("surface", prefix + "_poly")) s.poly = *p;
        if (auto t = cfg.nums("surface", prefix + "_trig")) {
            if (t->size() % 3) throw Error(ErrorCode::Config, "surface." + prefix + "_trig needs (w, a, b) triples");
            for (std::size_t i = 0; i < t->size(); i += 3) s.trig.push_back({(*t)[i], (*t)[i + 1], (*t)[i + 2]});
        }
        return s;
    };
    for (int c = 0; c < 3; ++c) {
        uc.f[c] = series(std::string("f") + axes[c]);
        uc.g[c] = series(std::string("g") + axes[c]);
    }
    return uc;
}

}  // namespace isogrow
