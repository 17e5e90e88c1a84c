#include "oacm/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "oacm/errors.hpp"

namespace oacm {

PhysParams RunConfig::phys_params() const {
    PhysParams p;
    p.Ro_a = Ro_a;
    p.Ro_o = Ro_o;
    p.Re_a = Re_a;
    p.Re_o = Re_o;
    p.Pe_a = Pe_a;
    p.Pe_o = Pe_o;
    p.gamma = gamma;
    p.sigma = sigma;
    p.coriolis = make_coriolis(grid(), f0);
    return p;
}

StepperConfig RunConfig::stepper() const {
    StepperConfig c;
    c.dt = dt;
    c.scheme = scheme;
    c.trunc = trunc();
    c.mode = mode;
    c.abort_on_member_blowup = abort_on_blowup;
    return c;
}

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Deterministic: return "deterministic";
        case Mode::SALT: return "salt";
        case Mode::LASALT: return "lasalt";
        case Mode::SAM: return "sam";
    }
    return "?";
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::RK3: return "rk3";
        case Scheme::HeunStratonovich: return "heun";
        case Scheme::EulerMaruyamaIto: return "em-ito";
    }
    return "?";
}

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string RunConfig::to_text() const {
    std::ostringstream os;
    os << "grid.n = " << n << "\n";
    os << "grid.L = " << fmt(L) << "\n";
    os << "grid.dealias = " << fmt(dealias_fraction) << "\n";
    os << "mode = " << mode_name(mode) << "\n";
    os << "scheme = " << scheme_name(scheme) << "\n";
    os << "dt = " << fmt(dt) << "\n";
    os << "T = " << fmt(T) << "\n";
    os << "output_interval = " << fmt(output_interval) << "\n";
    os << "members = " << members << "\n";
    os << "seed = " << seed << "\n";
    os << "Ro_a = " << fmt(Ro_a) << "\nRo_o = " << fmt(Ro_o) << "\n";
    os << "Re_a = " << fmt(Re_a) << "\nRe_o = " << fmt(Re_o) << "\n";
    os << "Pe_a = " << fmt(Pe_a) << "\nPe_o = " << fmt(Pe_o) << "\n";
    os << "gamma = " << fmt(gamma) << "\nsigma = " << fmt(sigma) << "\n";
    os << "f0 = " << fmt(f0) << "\n";
    os << "R_cut = " << fmt(R_cut) << "\ndelta = " << fmt(delta) << "\ns = " << s << "\n";
    os << "noise.M = " << noise_M << "\n";
    os << "noise.amplitude = " << fmt(noise_amplitude) << "\n";
    os << "noise.decay = " << fmt(noise_decay) << "\n";
    os << "noise.sign = " << fmt(noise_sign) << "\n";
    os << "noise.solenoidal = " << (noise_solenoidal ? "true" : "false") << "\n";
    os << "loop.cx = " << fmt(loop_cx) << "\nloop.cy = " << fmt(loop_cy) << "\n";
    os << "loop.radius = " << fmt(loop_radius) << "\nloop.K = " << loop_K << "\n";
    os << "init.kmax = " << init_kmax << "\n";
    os << "init.amplitude = " << fmt(init_amplitude) << "\n";
    os << "sam.kappa = " << fmt(sam_kappa) << "\nsam.alpha = " << fmt(sam_alpha) << "\n";
    os << "sam.theta0 = " << fmt(sam_theta0) << "\nsam.D_perturb = " << fmt(sam_D_perturb) << "\n";
    os << "output.dir = " << output_dir << "\n";
    os << "output.snapshots = " << (snapshots ? "true" : "false") << "\n";
    os << "strict_signs = " << (strict_signs ? "true" : "false") << "\n";
    os << "abort_on_blowup = " << (abort_on_blowup ? "true" : "false") << "\n";
    return os.str();
}

namespace {

struct Parser {
    std::vector<std::string> errors;

    bool to_double(const std::string& key, const std::string& v, double& out) {
        std::string s = v;
        if (s == "inf") {
            out = std::numeric_limits<double>::infinity();
            return true;
        }
        try {
            size_t pos = 0;
            out = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing");
            return true;
        } catch (...) {
            errors.push_back(key + ": not a number: '" + v + "'");
            return false;
        }
    }
    bool to_int(const std::string& key, const std::string& v, int& out) {
        try {
            size_t pos = 0;
            out = std::stoi(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing");
            return true;
        } catch (...) {
            errors.push_back(key + ": not an integer: '" + v + "'");
            return false;
        }
    }
    bool to_u64(const std::string& key, const std::string& v, uint64_t& out) {
        try {
            size_t pos = 0;
            out = std::stoull(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing");
            return true;
        } catch (...) {
            errors.push_back(key + ": not an unsigned integer: '" + v + "'");
            return false;
        }
    }
    bool to_bool(const std::string& key, const std::string& v, bool& out) {
        if (v == "true" || v == "1") {
            out = true;
            return true;
        }
        if (v == "false" || v == "0") {
            out = false;
            return true;
        }
        errors.push_back(key + ": not a boolean (true/false): '" + v + "'");
        return false;
    }
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    Parser p;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            p.errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "grid.n") p.to_int(key, val, c.n);
        else if (key == "grid.L") p.to_double(key, val, c.L);
        else if (key == "grid.dealias") p.to_double(key, val, c.dealias_fraction);
        else if (key == "mode") {
            if (val == "deterministic") c.mode = Mode::Deterministic;
            else if (val == "salt") c.mode = Mode::SALT;
            else if (val == "lasalt") c.mode = Mode::LASALT;
            else if (val == "sam") c.mode = Mode::SAM;
            else p.errors.push_back("mode: unknown value '" + val + "' (deterministic|salt|lasalt|sam)");
        } else if (key == "scheme") {
            c.scheme_explicit = true;
            if (val == "rk3") c.scheme = Scheme::RK3;
            else if (val == "heun") c.scheme = Scheme::HeunStratonovich;
            else if (val == "em-ito") c.scheme = Scheme::EulerMaruyamaIto;
            else p.errors.push_back("scheme: unknown value '" + val + "' (rk3|heun|em-ito)");
        }
        else if (key == "dt") p.to_double(key, val, c.dt);
        else if (key == "T") p.to_double(key, val, c.T);
        else if (key == "output_interval") p.to_double(key, val, c.output_interval);
        else if (key == "members") p.to_int(key, val, c.members);
        else if (key == "seed") p.to_u64(key, val, c.seed);
        else if (key == "Ro_a") p.to_double(key, val, c.Ro_a);
        else if (key == "Ro_o") p.to_double(key, val, c.Ro_o);
        else if (key == "Re_a") p.to_double(key, val, c.Re_a);
        else if (key == "Re_o") p.to_double(key, val, c.Re_o);
        else if (key == "Pe_a") p.to_double(key, val, c.Pe_a);
        else if (key == "Pe_o") p.to_double(key, val, c.Pe_o);
        else if (key == "gamma") p.to_double(key, val, c.gamma);
        else if (key == "sigma") p.to_double(key, val, c.sigma);
        else if (key == "f0") p.to_double(key, val, c.f0);
        else if (key == "R_cut") p.to_double(key, val, c.R_cut);
        else if (key == "delta") p.to_double(key, val, c.delta);
        else if (key == "s") p.to_int(key, val, c.s);
        else if (key == "noise.M") p.to_int(key, val, c.noise_M);
        else if (key == "noise.amplitude") p.to_double(key, val, c.noise_amplitude);
        else if (key == "noise.decay") p.to_double(key, val, c.noise_decay);
        else if (key == "noise.sign") p.to_double(key, val, c.noise_sign);
        else if (key == "noise.solenoidal") p.to_bool(key, val, c.noise_solenoidal);
        else if (key == "loop.cx") p.to_double(key, val, c.loop_cx);
        else if (key == "loop.cy") p.to_double(key, val, c.loop_cy);
        else if (key == "loop.radius") p.to_double(key, val, c.loop_radius);
        else if (key == "loop.K") p.to_int(key, val, c.loop_K);
        else if (key == "init.kmax") p.to_int(key, val, c.init_kmax);
        else if (key == "init.amplitude") p.to_double(key, val, c.init_amplitude);
        else if (key == "sam.kappa") p.to_double(key, val, c.sam_kappa);
        else if (key == "sam.alpha") p.to_double(key, val, c.sam_alpha);
        else if (key == "sam.theta0") p.to_double(key, val, c.sam_theta0);
        else if (key == "sam.D_perturb") p.to_double(key, val, c.sam_D_perturb);
        else if (key == "output.dir") c.output_dir = val;
        else if (key == "output.snapshots") p.to_bool(key, val, c.snapshots);
        else if (key == "strict_signs") p.to_bool(key, val, c.strict_signs);
        else if (key == "abort_on_blowup") p.to_bool(key, val, c.abort_on_blowup);
        else p.errors.push_back("unknown key: '" + key + "'");
    }

    // default scheme follows the mode when not named explicitly
    if (!c.scheme_explicit && (c.mode == Mode::SALT || c.mode == Mode::LASALT))
        c.scheme = Scheme::HeunStratonovich;

    auto& e = p.errors;
    if (c.n < 8 || c.n % 2 != 0) e.push_back("grid.n: must be even and >= 8");
    if (!(c.L > 0)) e.push_back("grid.L: must be > 0");
    if (!(c.dealias_fraction > 0 && c.dealias_fraction <= 1))
        e.push_back("grid.dealias: must be in (0, 1]");
    if (!(c.dt > 0)) e.push_back("dt: must be > 0");
    if (!(c.T >= 0)) e.push_back("T: must be >= 0");
    if (!(c.output_interval > 0)) e.push_back("output_interval: must be > 0");
    if (c.members < 1) e.push_back("members: must be >= 1");
    if (!(c.Ro_a > 0)) e.push_back("Ro_a: must be > 0");
    if (!(c.Ro_o > 0)) e.push_back("Ro_o: must be > 0");
    if (!(c.Re_a > 0)) e.push_back("Re_a: must be > 0 (or inf)");
    if (!(c.Re_o > 0)) e.push_back("Re_o: must be > 0 (or inf)");
    if (!(c.Pe_a > 0)) e.push_back("Pe_a: must be > 0 (or inf)");
    if (!(c.Pe_o > 0)) e.push_back("Pe_o: must be > 0 (or inf)");
    if (!(c.R_cut > 0)) e.push_back("R_cut: must be > 0");
    if (!(c.delta > 0)) e.push_back("delta: must be > 0");
    if (c.s < 0) e.push_back("s: must be >= 0");
    if (c.noise_M < 0) e.push_back("noise.M: must be >= 0");
    if (!(c.noise_decay > 0)) e.push_back("noise.decay: must be > 0");
    if (c.noise_sign != 1.0 && c.noise_sign != -1.0) e.push_back("noise.sign: must be 1 or -1");
    if (c.loop_K < 3) e.push_back("loop.K: must be >= 3");
    if (!(c.loop_radius > 0)) e.push_back("loop.radius: must be > 0");
    if (c.init_kmax < 0) e.push_back("init.kmax: must be >= 0");
    if (!(c.sam_kappa > 0)) e.push_back("sam.kappa: must be > 0");
    if (!(c.sam_alpha > 1)) e.push_back("sam.alpha: must be > 1");
    if (!(c.sam_theta0 > 0)) e.push_back("sam.theta0: must be > 0");
    if (c.mode == Mode::Deterministic && c.scheme != Scheme::RK3)
        e.push_back("scheme: deterministic mode requires rk3");
    if (c.strict_signs && (c.gamma > 0 || c.sigma > 0))
        e.push_back("gamma/sigma: coupling constants gamma,sigma < 0 are required "
                    "under strict_signs (got gamma=" + fmt(c.gamma) +
                    ", sigma=" + fmt(c.sigma) + ")");

    if (!e.empty()) {
        std::string msg = "config validation failed:";
        for (const auto& m : e) msg += "\n  " + m;
        throw ConfigError(msg);
    }
    return c;
}

}  // namespace oacm
