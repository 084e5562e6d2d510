#include "cavityspec/cli.hpp"

#include "cavityspec/emit.hpp"
#include "cavityspec/errors.hpp"
#include "cavityspec/models.hpp"
#include "cavityspec/observables.hpp"
#include "cavityspec/reference_data.hpp"
#include "cavityspec/rootkit.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cavityspec::cli {

namespace md = cavityspec::models;
namespace ob = cavityspec::observables;
namespace rk = cavityspec::rootkit;
using cavityspec::emit::fmt_g;
using cavityspec::emit::round12;
using nlohmann::json;

namespace {

struct Opts {
    std::string model;
    double L = 0.0;
    double R = 0.0;
    std::string gamma;
    std::string parity = "even";
    int m = 0;
    int count = 4;
    int index = 0;
    int points = 201;
    double u_min = std::nan("");
    double u_max = std::nan("");
    std::string unit;
    std::string format; // empty = per-command default
    std::string output;
    int nodes = 128;
    int samples = 256;
    int level_a = 0;
    int level_b = 1;
    std::string sector_a;
    std::string sector_b;
    std::string config_path;
};

// ---- config file: flat `key = value` lines, flags win over the file ----

std::vector<std::string> load_config_tokens(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        fail(errc::config, "cannot read config file: " + path);
    std::vector<std::string> tokens;
    std::string line;
    auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t\r");
        auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(errc::config, "config file " + path + ": line " +
                                   std::to_string(lineno) +
                                   " is not `key = value`");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            fail(errc::config, "config file " + path + ": line " +
                                   std::to_string(lineno) +
                                   " is not `key = value`");
        tokens.push_back("--" + key);
        tokens.push_back(val);
    }
    return tokens;
}

// Injects config-file tokens right after the subcommand so that flags
// typed on the command line, parsed with a take-last policy, override.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty() || args.empty() || args[0].empty() || args[0][0] == '-')
        return args;
    std::vector<std::string> toks = load_config_tokens(path);
    std::vector<std::string> merged;
    merged.push_back(args[0]);
    merged.insert(merged.end(), toks.begin(), toks.end());
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

// ---- shared parsing/validation ----

md::RobinParam parse_gamma(const std::string& s,
                           std::vector<std::string>& errs) {
    if (s.empty()) {
        errs.push_back("--gamma is required (a real value or `dirichlet`)");
        return md::RobinParam::dirichlet();
    }
    if (s == "dirichlet")
        return md::RobinParam::dirichlet();
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
        errs.push_back("--gamma must be a finite real or `dirichlet`, got `" +
                       s + "`");
        return md::RobinParam::dirichlet();
    }
    return md::RobinParam::finite(v);
}

bool is_disc(const std::string& model) { return model != "sho1d"; }

double checked_size(const Opts& o, std::vector<std::string>& errs) {
    if (o.model == "sho1d") {
        if (!(o.L > 0.0 && o.L <= 50.0))
            errs.push_back("--L must be in (0, 50] for sho1d");
        return o.L;
    }
    if (!(o.R > 0.0 && o.R <= 50.0))
        errs.push_back("--R must be in (0, 50] for the disc models");
    return o.R;
}

void check_model(const Opts& o, std::vector<std::string>& errs) {
    if (o.model != "sho1d" && o.model != "disc-free" && o.model != "disc-iso")
        errs.push_back("--model must be sho1d, disc-free, or disc-iso");
}

void check_sector(const Opts& o, std::vector<std::string>& errs) {
    if (o.model == "sho1d") {
        if (o.parity != "even" && o.parity != "odd")
            errs.push_back("--parity must be even or odd");
    } else if (o.m < -10 || o.m > 10) {
        errs.push_back("--m must be in [-10, 10]");
    }
}

md::EnergyUnit checked_unit(const Opts& o, std::vector<std::string>& errs) {
    if (o.model == "disc-free") {
        if (o.unit.empty() || o.unit == "half_inv_MR2")
            return md::EnergyUnit::half_inv_MR2;
        if (o.unit == "pi2_half_inv_MR2")
            return md::EnergyUnit::pi2_half_inv_MR2;
        errs.push_back("--unit must be half_inv_MR2 or pi2_half_inv_MR2");
        return md::EnergyUnit::half_inv_MR2;
    }
    if (!o.unit.empty() && o.unit != "omega")
        errs.push_back("--unit: the oscillator models report energies in "
                       "omega only");
    return md::EnergyUnit::omega;
}

[[noreturn]] void config_fail(const std::vector<std::string>& errs) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errs)
        msg += "\n  - " + e;
    fail(errc::config, msg);
}

std::string sector_string(const Opts& o) {
    return o.model == "sho1d" ? o.parity : std::to_string(o.m);
}

std::string pick_format(const Opts& o, const char* dflt) {
    return o.format.empty() ? dflt : o.format;
}

std::string gamma_string(const md::RobinParam& bc) {
    return bc.is_dirichlet ? "dirichlet" : fmt_g(bc.gamma);
}

double signed_spectral(const md::EigenState& st) {
    return st.negative_energy ? -st.spectral : st.spectral;
}

md::SpectrumResult solve_spectrum(const Opts& o, const md::RobinParam& bc,
                                  double size, int count,
                                  md::EnergyUnit unit) {
    if (o.model == "sho1d")
        return md::sho_spectrum(size, bc,
                                o.parity == "even" ? md::Parity::even
                                                   : md::Parity::odd,
                                count);
    if (o.model == "disc-free")
        return md::free_spectrum(size, bc, o.m, count, unit);
    return md::iso_spectrum(size, bc, o.m, count);
}

void write_payload(const Opts& o, const std::string& payload,
                   std::ostream& out) {
    if (o.output.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!f)
        fail(errc::config, "cannot open output file: " + o.output);
    f << payload;
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',')
            c = ';';
    return s;
}

// ---- u-grid (wall-coupling sweep rescaled through arctan) ----

std::vector<double> make_ugrid(const Opts& o, std::vector<std::string>& errs) {
    if (o.points < 2 || o.points > 20001) {
        errs.push_back("--points must be in [2, 20001]");
        return {};
    }
    bool have_min = std::isfinite(o.u_min), have_max = std::isfinite(o.u_max);
    std::vector<double> u;
    if (have_min != have_max) {
        errs.push_back("--u-min and --u-max must be given together");
        return {};
    }
    if (have_min) {
        if (!(o.u_min < o.u_max) || o.u_min <= -M_PI / 2 ||
            o.u_max >= M_PI / 2) {
            errs.push_back("the u range must satisfy -pi/2 < u-min < u-max "
                           "< pi/2");
            return {};
        }
        for (int i = 0; i < o.points; ++i)
            u.push_back(o.u_min +
                        i * (o.u_max - o.u_min) / (o.points - 1.0));
    } else {
        // default: interior points of (-pi/2, pi/2), endpoints excluded
        // (they are the Dirichlet limit, gamma = +-infinity)
        for (int i = 0; i < o.points; ++i)
            u.push_back(-M_PI / 2 + (i + 1) * M_PI / (o.points + 1.0));
    }
    return u;
}

double gamma_of_u(const Opts& o, double size, double u) {
    return o.model == "sho1d" ? 2.0 * std::tan(u) / size
                              : std::tan(u) / size;
}

// ---- subcommands ----

int cmd_spectrum(const Opts& o, std::ostream& out) {
    std::vector<std::string> errs;
    check_model(o, errs);
    if (!errs.empty())
        config_fail(errs);
    double size = checked_size(o, errs);
    check_sector(o, errs);
    md::RobinParam bc = parse_gamma(o.gamma, errs);
    md::EnergyUnit unit = checked_unit(o, errs);
    if (o.count < 1 || o.count > 20)
        errs.push_back("--count must be in [1, 20]");
    std::string format = pick_format(o, "csv");
    if (format != "csv" && format != "json")
        errs.push_back("--format must be csv or json for spectrum");
    if (!errs.empty())
        config_fail(errs);

    md::SpectrumResult res = solve_spectrum(o, bc, size, o.count, unit);

    std::ostringstream buf;
    if (format == "csv") {
        emit::CsvTable t;
        t.header = {"model",  "sector",      "index", "spectral",
                    "energy", "energy_unit", "gamma", "size"};
        for (const auto& st : res.states)
            t.rows.push_back({md::to_string(st.model), sector_string(o),
                              std::to_string(st.index),
                              fmt_g(signed_spectral(st)), fmt_g(st.energy),
                              md::to_string(st.unit), gamma_string(bc),
                              fmt_g(size)});
        t.write(buf);
    } else {
        json arr = json::array();
        for (const auto& st : res.states) {
            json row;
            row["model"] = md::to_string(st.model);
            row["sector"] = sector_string(o);
            row["index"] = st.index;
            row["spectral"] = round12(signed_spectral(st));
            row["energy"] = round12(st.energy);
            row["energy_unit"] = md::to_string(st.unit);
            if (bc.is_dirichlet)
                row["gamma"] = "dirichlet";
            else
                row["gamma"] = round12(bc.gamma);
            row["size"] = round12(size);
            arr.push_back(row);
        }
        buf << arr.dump(2) << "\n";
    }
    write_payload(o, buf.str(), out);
    return 0;
}

int cmd_scan(const Opts& o, std::ostream& out) {
    std::vector<std::string> errs;
    check_model(o, errs);
    if (!errs.empty())
        config_fail(errs);
    double size = checked_size(o, errs);
    check_sector(o, errs);
    md::EnergyUnit unit = checked_unit(o, errs);
    if (o.count < 1 || o.count > 20)
        errs.push_back("--count must be in [1, 20]");
    std::vector<double> u = make_ugrid(o, errs);
    std::string format = pick_format(o, "csv");
    if (format != "csv" && format != "json" && format != "svg")
        errs.push_back("--format must be csv, json, or svg for scan");
    if (!errs.empty())
        config_fail(errs);

    struct Row {
        double u, gamma;
        int branch;
        double spectral, energy;
        std::string warning;
    };
    std::vector<Row> rows;
    for (double ui : u) {
        double g = gamma_of_u(o, size, ui);
        md::SpectrumResult res =
            solve_spectrum(o, md::RobinParam::finite(g), size, o.count, unit);
        for (const auto& st : res.states)
            rows.push_back({ui, g, st.index, signed_spectral(st), st.energy,
                            res.partial ? csv_safe(res.warning) : ""});
    }

    std::ostringstream buf;
    if (format == "csv") {
        emit::CsvTable t;
        t.header = {"u", "gamma", "branch", "spectral", "energy", "warning"};
        for (const auto& r : rows)
            t.rows.push_back({fmt_g(r.u), fmt_g(r.gamma),
                              std::to_string(r.branch), fmt_g(r.spectral),
                              fmt_g(r.energy), r.warning});
        t.write(buf);
    } else if (format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            json row;
            row["u"] = round12(r.u);
            row["gamma"] = round12(r.gamma);
            row["branch"] = r.branch;
            row["spectral"] = round12(r.spectral);
            row["energy"] = round12(r.energy);
            row["warning"] = r.warning;
            arr.push_back(row);
        }
        buf << arr.dump(2) << "\n";
    } else {
        static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                        "#9467bd", "#8c564b", "#e377c2"};
        emit::SvgPlot plot;
        plot.title = std::string(o.model) + " levels, sector " +
                     sector_string(o);
        plot.xlabel = o.model == "sho1d" ? "u = arctan(gamma L / 2)"
                                         : "u = arctan(gamma R)";
        plot.ylabel = "E";
        for (int b = 0; b < o.count; ++b) {
            emit::SvgSeries s;
            s.color = palette[b % 6];
            s.label = "level " + std::to_string(b);
            for (const auto& r : rows)
                if (r.branch == b) {
                    s.x.push_back(r.u);
                    s.y.push_back(r.energy);
                }
            plot.series.push_back(std::move(s));
        }
        // Dirichlet levels of the same sector as dotted reference lines
        md::SpectrumResult ref = solve_spectrum(
            o, md::RobinParam::dirichlet(), size, o.count, unit);
        for (const auto& st : ref.states)
            plot.hlines.push_back(st.energy);
        plot.write(buf);
    }
    write_payload(o, buf.str(), out);
    return 0;
}

int cmd_resonance(const Opts& o, std::ostream& out) {
    std::vector<std::string> errs;
    check_model(o, errs);
    if (!errs.empty())
        config_fail(errs);
    double size = checked_size(o, errs);
    check_sector(o, errs);
    md::EnergyUnit unit = checked_unit(o, errs);
    std::vector<double> u = make_ugrid(o, errs);
    if (o.level_a < 0 || o.level_a > 19 || o.level_b < 0 || o.level_b > 19 ||
        o.level_a == o.level_b)
        errs.push_back("--level-a and --level-b must be distinct levels in "
                       "[0, 19]");
    std::string sa = o.sector_a.empty() ? sector_string(o) : o.sector_a;
    std::string sb = o.sector_b.empty() ? sector_string(o) : o.sector_b;
    if (sa != sb)
        errs.push_back("both levels must come from one symmetry sector "
                       "(got " + sa + " and " + sb + ")");
    std::string format = pick_format(o, "csv");
    if (format != "csv" && format != "json")
        errs.push_back("--format must be csv or json for resonance");
    if (!errs.empty())
        config_fail(errs);

    int need = std::max(o.level_a, o.level_b) + 1;
    rk::Branch lower, upper;
    lower.branch_index = o.level_a;
    upper.branch_index = o.level_b;
    for (double ui : u) {
        double g = gamma_of_u(o, size, ui);
        md::SpectrumResult res =
            solve_spectrum(o, md::RobinParam::finite(g), size, need, unit);
        if (static_cast<int>(res.states.size()) < need)
            continue; // keep the two grids aligned
        lower.gamma_grid.push_back(g);
        lower.roots.push_back(res.states[o.level_a].energy);
        lower.jump_flag.push_back(0);
        upper.gamma_grid.push_back(g);
        upper.roots.push_back(res.states[o.level_b].energy);
        upper.jump_flag.push_back(0);
    }
    if (lower.gamma_grid.size() < 2)
        fail(errc::solver, "resonance: fewer than two usable grid points");

    auto gap_fn = [&](double g) {
        md::SpectrumResult res =
            solve_spectrum(o, md::RobinParam::finite(g), size, need, unit);
        if (static_cast<int>(res.states.size()) < need)
            fail(errc::solver, "resonance: level lost during refinement");
        return res.states[o.level_b].energy - res.states[o.level_a].energy;
    };
    auto [gstar, gap] = rk::min_gap(lower, upper, gap_fn);

    md::SpectrumResult at =
        solve_spectrum(o, md::RobinParam::finite(gstar), size, need, unit);
    if (static_cast<int>(at.states.size()) < need)
        fail(errc::solver, "resonance: level lost at the minimum");
    const md::EigenState& lo_state = at.states[o.level_a];

    std::ostringstream buf;
    if (format == "csv") {
        emit::CsvTable t;
        t.header = {"gamma_star", "gap", "spectral", "energy"};
        t.rows.push_back({fmt_g(gstar), fmt_g(gap),
                          fmt_g(signed_spectral(lo_state)),
                          fmt_g(lo_state.energy)});
        t.write(buf);
    } else {
        json row;
        row["gamma_star"] = round12(gstar);
        row["gap"] = round12(gap);
        row["spectral"] = round12(signed_spectral(lo_state));
        row["energy"] = round12(lo_state.energy);
        buf << row.dump(2) << "\n";
    }
    write_payload(o, buf.str(), out);
    return 0;
}

int cmd_verify_tables(const Opts& o, std::ostream& out, std::ostream& err) {
    std::vector<std::string> errs;
    if (pick_format(o, "csv") != "csv")
        errs.push_back("verify-tables emits csv only");
    if (!errs.empty())
        config_fail(errs);

    emit::CsvTable t;
    t.header = {"table", "size",      "gamma",  "nu_ref",  "nu",
                "dnu",   "energy_ref", "energy", "denergy", "pass"};
    int failures = 0;
    auto add = [&](const char* table, const reference::ResonanceRow& row,
                   const md::EigenState& st) {
        double dnu = std::abs(st.spectral - row.nu);
        double de = std::abs(st.energy - row.energy);
        bool ok = dnu <= 2e-3 && de <= 2e-3;
        if (!ok) {
            ++failures;
            err << "verify-tables: " << table << " size " << fmt_g(row.size)
                << ": nu " << fmt_g(st.spectral) << " vs " << fmt_g(row.nu)
                << ", energy " << fmt_g(st.energy) << " vs "
                << fmt_g(row.energy) << "\n";
        }
        t.rows.push_back({table, fmt_g(row.size), fmt_g(row.gamma),
                          fmt_g(row.nu), fmt_g(st.spectral), fmt_g(dnu),
                          fmt_g(row.energy), fmt_g(st.energy), fmt_g(de),
                          ok ? "1" : "0"});
    };

    for (const auto& row : reference::box_resonances) {
        md::SpectrumResult res = md::sho_spectrum(
            row.size, md::RobinParam::finite(row.gamma), md::Parity::even, 1);
        if (res.states.empty())
            fail(errc::solver, "verify-tables: no box level found");
        add("box", row, res.states[0]);
    }
    for (const auto& row : reference::disc_resonances) {
        md::SpectrumResult res = md::iso_spectrum(
            row.size, md::RobinParam::finite(row.gamma), 0, 1);
        if (res.states.empty())
            fail(errc::solver, "verify-tables: no disc level found");
        add("disc", row, res.states[0]);
    }

    std::ostringstream buf;
    t.write(buf);
    write_payload(o, buf.str(), out);
    return failures == 0 ? 0 : 1;
}

int cmd_uncertainty(const Opts& o, std::ostream& out) {
    std::vector<std::string> errs;
    check_model(o, errs);
    if (!errs.empty())
        config_fail(errs);
    double size = checked_size(o, errs);
    check_sector(o, errs);
    md::RobinParam bc = parse_gamma(o.gamma, errs);
    md::EnergyUnit unit = checked_unit(o, errs);
    if (o.index < 0 || o.index > 19)
        errs.push_back("--index must be in [0, 19]");
    if (o.nodes < 2 || o.nodes > 512)
        errs.push_back("--nodes must be in [2, 512]");
    if (pick_format(o, "json") != "json")
        errs.push_back("uncertainty emits json only");
    if (!errs.empty())
        config_fail(errs);

    md::SpectrumResult res = solve_spectrum(o, bc, size, o.index + 1, unit);
    if (static_cast<int>(res.states.size()) <= o.index)
        fail(errc::solver,
             "uncertainty: requested level not found in the search window");
    const md::EigenState& st = res.states[o.index];
    ob::UncertaintyReport rep = ob::uncertainty_check(st, bc, size, o.nodes);

    json j;
    j["model"] = md::to_string(st.model);
    j["sector"] = sector_string(o);
    j["index"] = st.index;
    if (bc.is_dirichlet)
        j["gamma"] = "dirichlet";
    else
        j["gamma"] = round12(bc.gamma);
    j["size"] = round12(size);
    j["spectral"] = round12(signed_spectral(st));
    j["energy"] = round12(st.energy);
    j["energy_unit"] = md::to_string(st.unit);
    j["lhs"] = round12(rep.lhs);
    j["rhs"] = round12(rep.rhs);
    j["moments"] = {{"mean_x", round12(rep.moments.mean_x)},
                    {"mean_x2", round12(rep.moments.mean_x2)},
                    {"delta_x", round12(rep.moments.delta_x)},
                    {"mean_nx", round12(rep.moments.mean_nx)},
                    {"mean_gamma", round12(rep.moments.mean_gamma)},
                    {"mean_n", round12(rep.moments.mean_n)}};
    j["satisfied"] = rep.satisfied;
    j["saturated"] = rep.saturated;

    std::ostringstream buf;
    buf << j.dump(2) << "\n";
    write_payload(o, buf.str(), out);
    return 0;
}

int cmd_wavefunction(const Opts& o, std::ostream& out) {
    std::vector<std::string> errs;
    check_model(o, errs);
    if (!errs.empty())
        config_fail(errs);
    double size = checked_size(o, errs);
    check_sector(o, errs);
    md::RobinParam bc = parse_gamma(o.gamma, errs);
    md::EnergyUnit unit = checked_unit(o, errs);
    if (o.samples < 64 || o.samples > 100000)
        errs.push_back("--samples must be in [64, 100000]");
    if (o.nodes < 2 || o.nodes > 512)
        errs.push_back("--nodes must be in [2, 512]");
    if (o.index < 0 || o.index > 19)
        errs.push_back("--index must be in [0, 19]");
    std::string format = pick_format(o, "csv");
    bool svg = format == "svg";
    if (svg && (o.count < 1 || o.count > 4))
        errs.push_back("--count must be in [1, 4] for the svg overlay");
    if (format != "csv" && format != "json" && format != "svg")
        errs.push_back("--format must be csv, json, or svg for wavefunction");
    if (!errs.empty())
        config_fail(errs);

    bool disc = is_disc(o.model);
    double lo = disc ? 0.0 : -size / 2.0;
    double hi = disc ? size : size / 2.0;
    auto coords = [&](int n) {
        std::vector<double> c(n);
        for (int i = 0; i < n; ++i)
            c[i] = lo + i * (hi - lo) / (n - 1.0);
        return c;
    };

    std::ostringstream buf;
    if (!svg) {
        md::SpectrumResult res = solve_spectrum(o, bc, size, o.index + 1, unit);
        if (static_cast<int>(res.states.size()) <= o.index)
            fail(errc::solver, "wavefunction: requested level not found in "
                               "the search window");
        ob::RadialProfile p =
            ob::make_profile(res.states[o.index], bc, size, o.nodes);
        std::vector<double> c = coords(o.samples);
        if (format == "csv") {
            emit::CsvTable t;
            t.header = {"coord", "amplitude", "density"};
            for (double x : c) {
                double a = p.amplitude(x);
                t.rows.push_back({fmt_g(x), fmt_g(a), fmt_g(a * a)});
            }
            t.write(buf);
        } else {
            json arr = json::array();
            for (double x : c) {
                double a = p.amplitude(x);
                json row;
                row["coord"] = round12(x);
                row["amplitude"] = round12(a);
                row["density"] = round12(a * a);
                arr.push_back(row);
            }
            buf << arr.dump(2) << "\n";
        }
    } else {
        md::SpectrumResult res = solve_spectrum(o, bc, size, o.count, unit);
        if (res.states.empty())
            fail(errc::solver, "wavefunction: no levels found");
        static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                        "#9467bd"};
        emit::SvgPlot plot;
        plot.title = std::string(o.model) + " amplitudes, gamma = " +
                     gamma_string(bc);
        plot.xlabel = disc ? "r" : "x";
        plot.ylabel = "amplitude";
        std::vector<double> c = coords(o.samples);
        for (std::size_t k = 0; k < res.states.size(); ++k) {
            ob::RadialProfile p =
                ob::make_profile(res.states[k], bc, size, o.nodes);
            emit::SvgSeries s;
            s.color = palette[k % 4];
            s.label = "E = " + fmt_g(res.states[k].energy);
            for (double x : c) {
                s.x.push_back(x);
                s.y.push_back(p.amplitude(x));
            }
            plot.series.push_back(std::move(s));
        }
        plot.write(buf);
    }
    write_payload(o, buf.str(), out);
    return 0;
}

// ---- option wiring ----

void add_common(CLI::App* sub, Opts& o, bool wants_gamma) {
    auto last = [](CLI::Option* opt) {
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        return opt;
    };
    last(sub->add_option("--model", o.model,
                         "sho1d | disc-free | disc-iso"));
    last(sub->add_option("--L", o.L, "box width"));
    last(sub->add_option("--R", o.R, "disc radius"));
    if (wants_gamma)
        last(sub->add_option("--gamma", o.gamma,
                             "wall coupling (real) or `dirichlet`"));
    last(sub->add_option("--parity", o.parity, "even | odd (sho1d)"));
    last(sub->add_option("--m", o.m, "angular momentum (disc models)"));
    last(sub->add_option("--unit", o.unit,
                         "energy unit (disc-free: half_inv_MR2 | "
                         "pi2_half_inv_MR2)"));
    last(sub->add_option("--format", o.format, "csv | json | svg"));
    last(sub->add_option("--output", o.output, "output file (default stdout)"));
    last(sub->add_option("--config", o.config_path,
                         "flat key = value file; flags override"));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    Opts o;
    CLI::App app{"spectra, resonances, and uncertainty audits for "
                 "wall-confined quantum systems"};
    app.require_subcommand(1);
    auto last = [](CLI::Option* opt) {
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        return opt;
    };

    CLI::App* sp = app.add_subcommand("spectrum", "energy levels at fixed "
                                                  "wall coupling");
    add_common(sp, o, true);
    last(sp->add_option("--count", o.count, "number of levels"));

    CLI::App* sc = app.add_subcommand("scan", "levels swept over the wall "
                                              "coupling");
    add_common(sc, o, false);
    last(sc->add_option("--count", o.count, "levels per coupling"));
    last(sc->add_option("--points", o.points, "grid points"));
    last(sc->add_option("--u-min", o.u_min, "lower edge of the arctan grid"));
    last(sc->add_option("--u-max", o.u_max, "upper edge of the arctan grid"));

    CLI::App* rs = app.add_subcommand("resonance", "coupling of closest "
                                                   "approach of two levels");
    add_common(rs, o, false);
    last(rs->add_option("--points", o.points, "grid points"));
    last(rs->add_option("--u-min", o.u_min, "lower edge of the arctan grid"));
    last(rs->add_option("--u-max", o.u_max, "upper edge of the arctan grid"));
    last(rs->add_option("--level-a", o.level_a, "lower level index"));
    last(rs->add_option("--level-b", o.level_b, "upper level index"));
    last(rs->add_option("--sector-a", o.sector_a, "sector of level a"));
    last(rs->add_option("--sector-b", o.sector_b, "sector of level b"));

    CLI::App* vt = app.add_subcommand("verify-tables",
                                      "recompute the reference resonance "
                                      "rows and report deviations");
    last(vt->add_option("--format", o.format, "csv"));
    last(vt->add_option("--output", o.output, "output file"));
    last(vt->add_option("--config", o.config_path, "config file"));

    CLI::App* un = app.add_subcommand("uncertainty",
                                      "wall-corrected uncertainty audit of "
                                      "one eigenstate");
    add_common(un, o, true);
    last(un->add_option("--index", o.index, "level index"));
    last(un->add_option("--nodes", o.nodes, "quadrature nodes")
             ->envname("CAVITYSPEC_QUAD_NODES"));

    CLI::App* wf = app.add_subcommand("wavefunction",
                                      "sampled eigenstate amplitude");
    add_common(wf, o, true);
    last(wf->add_option("--index", o.index, "level index (csv/json)"));
    last(wf->add_option("--count", o.count, "states overlaid (svg)"));
    last(wf->add_option("--samples", o.samples, "sample points"));
    last(wf->add_option("--nodes", o.nodes, "quadrature nodes")
             ->envname("CAVITYSPEC_QUAD_NODES"));

    std::vector<std::string> expanded;
    try {
        expanded = expand_config(args);
    } catch (const error& e) {
        err << "cavityspec: " << e.what() << "\n";
        return 2;
    }
    std::vector<const char*> argv;
    argv.push_back("cavityspec");
    for (const auto& a : expanded)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sp->parsed())
            return cmd_spectrum(o, out);
        if (sc->parsed())
            return cmd_scan(o, out);
        if (rs->parsed())
            return cmd_resonance(o, out);
        if (vt->parsed())
            return cmd_verify_tables(o, out, err);
        if (un->parsed())
            return cmd_uncertainty(o, out);
        if (wf->parsed())
            return cmd_wavefunction(o, out);
        err << "cavityspec: no subcommand\n";
        return 2;
    } catch (const error& e) {
        err << "cavityspec: " << e.what() << "\n";
        return e.kind() == errc::config ? 2 : 3;
    } catch (const std::exception& e) {
        err << "cavityspec: " << e.what() << "\n";
        return 3;
    }
}

} // namespace cavityspec::cli
