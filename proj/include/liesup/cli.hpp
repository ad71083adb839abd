#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "suite.hpp"
#include "system_spec.hpp"

namespace liesup::cli {

enum ExitCode : int { Ok = 0, InputError = 1, CapExceededExit = 2, VerificationFailed = 3, SingularIntegration = 4 };

inline doc::Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    try {
        return doc::Json::parse(in);
    } catch (const doc::Json::parse_error& e) {
        throw Error("'" + path + "' is not valid JSON: " + e.what());
    }
}

/// Writes through a sibling temporary file and renames it into place.
inline void write_atomically(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw Error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot move output into '" + path + "': " + ec.message());
    }
}

inline void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& out) {
    if (path) {
        write_atomically(*path, content);
    } else {
        out << content;
    }
}

inline doc::Json closure_document(const LieBasis& basis, const std::vector<std::string>& names) {
    auto sc = structure_constants(basis);
    doc::Json j;
    j["dimension"] = basis.size();
    j["variables"] = names;
    doc::Json fields = doc::Json::array();
    for (const auto& f : basis.fields()) fields.push_back(doc::field_json(f, names));
    j["basis"] = fields;
    doc::Json consts = doc::Json::array();
    for (std::size_t a = 0; a < sc.dimension(); ++a) {
        for (std::size_t b = a + 1; b < sc.dimension(); ++b) {
            for (std::size_t g = 0; g < sc.dimension(); ++g) {
                if (!sc(a, b, g).is_zero()) consts.push_back({a, b, g, sc(a, b, g).to_string()});
            }
        }
    }
    j["structure_constants"] = consts;
    j["killing_determinant"] = determinant(killing_form(sc)).to_string();
    j["center_dimension"] = center_dimension(sc);
    j["modular"] = is_modular_basis(basis);
    return j;
}

/// Closure of a generators document {"variables": [...], "fields": [[...], ...]}.
inline int cmd_closure(const std::string& file, std::size_t cap, const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err) {
    try {
        const auto j = read_json(file);
        auto gens = detail::parse_generators(j, "");
        std::vector<std::string> names;
        if (j.contains("fields")) {
            names = doc::variable_names(j, gens.front().dimension(), "");
        } else {
            names = doc::default_names(gens.front().dimension());
        }
        const auto basis = closure(gens, cap);
        emit(out_path, closure_document(basis, names).dump(2) + "\n", out);
        return Ok;
    } catch (const CapExceeded& e) {
        err << e.what() << "\n";
        return CapExceededExit;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return InputError;
    }
}

inline int cmd_hierarchy(long order, std::ostream& out, std::ostream& err) {
    if (order < 2 || order > 8) {
        err << "error: --order must be in [2, 8], got " << order << "\n";
        return InputError;
    }
    out << generate_member(static_cast<std::size_t>(order)).to_string() << "\n";
    return Ok;
}

/// Lists gl(s) as X[i,j] = u^j d/du^i, or the generating set {X[s-1,j]} plus Delta.
inline int cmd_basis(long order, const std::string& which, std::ostream& out, std::ostream& err) {
    if (order < 1 || order > 8) {
        err << "error: --order must be in [1, 8], got " << order << "\n";
        return InputError;
    }
    const auto s = static_cast<std::size_t>(order);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < s; ++i) names.push_back("u" + std::to_string(i));
    if (which == "gl") {
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t jdx = 0; jdx < s; ++jdx) out << "X[" << i << "," << jdx << "] = " << gl_field(s, i, jdx).to_string(names) << "\n";
        }
        return Ok;
    }
    if (which == "linear") {
        if (s < 2) {
            err << "error: linear generators need --order >= 2\n";
            return InputError;
        }
        for (std::size_t jdx = 0; jdx < s; ++jdx) out << "X[" << s - 1 << "," << jdx << "] = " << gl_field(s, s - 1, jdx).to_string(names) << "\n";
        out << "Delta = " << delta_field(s).to_string(names) << "\n";
        return Ok;
    }
    err << "error: unknown basis '" << which << "' (expected gl or linear)\n";
    return InputError;
}

inline int cmd_verify(const std::string& file, const std::optional<std::string>& out_path, std::optional<std::uint64_t> seed, std::ostream& out,
                      std::ostream& err) {
    SuiteReport rep;
    try {
        auto suite = read_json(file);
        if (seed && suite.contains("items") && suite["items"].is_array()) {
            for (auto& item : suite["items"]) {
                if (item.is_object()) item["seed"] = *seed;
            }
        }
        rep = run_suite(suite);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return InputError;
    }
    const std::string text = rep.to_json().dump(2) + "\n";
    try {
        emit(out_path, text, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return InputError;
    }
    if (out_path) {
        for (std::size_t i = 0; i < rep.items.size(); ++i) {
            const auto& item = rep.items[i].item;
            out << (rep.items[i].pass ? "PASS " : "FAIL ") << item.value("name", "items[" + std::to_string(i) + "]") << "\n";
        }
    }
    return rep.all_pass() ? Ok : VerificationFailed;
}

struct IntegrateOptions {
    std::vector<double> x0;
    std::vector<double> tspan{0.0, 1.0};
    IntegratorConfig cfg;
    std::optional<std::string> out;
    bool dump_spec = false;
};

inline int cmd_integrate(const std::string& spec_file, const IntegrateOptions& opt, std::ostream& out, std::ostream& err) {
    SystemSpec spec;
    try {
        spec = SystemSpec::from_json(read_json(spec_file));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return InputError;
    }
    if (opt.dump_spec) {
        try {
            emit(opt.out, spec.to_json().dump(2) + "\n", out);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return InputError;
        }
        return Ok;
    }
    if (opt.x0.size() != spec.dimension()) {
        err << "error: --x0 has " << opt.x0.size() << " values, the system has dimension " << spec.dimension() << "\n";
        return InputError;
    }
    if (opt.tspan.size() != 2 || !(opt.tspan[0] < opt.tspan[1])) {
        err << "error: --tspan must be t0,t1 with t0 < t1\n";
        return InputError;
    }
    Trajectory traj(spec.dimension());
    try {
        opt.cfg.validate();
        traj = integrate(spec.build(), opt.x0, opt.tspan[0], opt.tspan[1], opt.cfg);
        std::ostringstream csv;
        write_csv(csv, traj);
        emit(opt.out, csv.str(), out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return InputError;
    }
    if (traj.status() == Status::Singular) {
        const auto& ev = *traj.event();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", ev.time);
        err << "singular integration at t* = " << buf << " (" << trigger_name(ev.trigger) << ": " << ev.detail << ")\n";
        return SingularIntegration;
    }
    if (traj.status() == Status::MaxStepsReached) {
        err << "integration stopped at t = " << traj.times().back() << " after the maximum number of steps\n";
        return SingularIntegration;
    }
    return Ok;
}

/// One line per item: status, name, kind and the headline measurement.
inline int cmd_report(const std::string& file, std::ostream& out, std::ostream& err) {
    doc::Json rep;
    try {
        rep = read_json(file);
        doc::require_array(rep, "items", "");
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return InputError;
    }
    std::size_t passed = 0;
    const auto& items = rep["items"];
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& it = items[i];
        const bool pass = it.value("pass", false);
        passed += pass ? 1 : 0;
        out << (pass ? "PASS  " : "FAIL  ") << std::left << std::setw(36) << it.value("name", "items[" + std::to_string(i) + "]") << std::setw(14)
            << it.value("kind", "?");
        const auto m = it.value("measured", doc::Json::object());
        if (m.contains("dimension")) out << "dimension " << m["dimension"];
        if (m.contains("max_error")) out << "max_error " << m["max_error"].get<double>() << "  max_drift " << m["max_drift"].get<double>();
        if (m.contains("identity_holds")) out << "identity " << (m["identity_holds"].get<bool>() ? "holds" : "fails");
        if (m.contains("error")) out << m["error"].get<std::string>();
        out << "\n";
    }
    out << passed << "/" << items.size() << " items passed\n";
    return Ok;
}

}  // namespace liesup::cli
