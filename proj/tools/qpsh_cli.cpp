// qpsh command-line front end.  Exit status: 0 pass, 1 fail, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qpsh/io.hpp"
#include "qpsh/verify.hpp"

using namespace qpsh;
using json = nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Common {
    std::uint64_t seed = 1;
    std::size_t samples = 0;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, std::size_t default_samples, const std::string& default_format) {
    c.samples = default_samples;
    c.format = default_format;
    cmd->add_option("--seed", c.seed, "root seed")->capture_default_str();
    if (default_samples) cmd->add_option("--samples", c.samples, "Monte-Carlo samples")->capture_default_str();
    cmd->add_option("--out", c.out, "also write the output into this directory");
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

std::string scalar_text(const json& v) {
    if (v.is_number_float()) return verify::fmt(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

/// Flat table, printed as CSV or as a JSON array of row objects.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;

    json to_json() const {
        json out = json::array();
        for (const auto& r : rows) {
            json o;
            for (std::size_t k = 0; k < header.size(); ++k) o[header[k]] = r[k];
            out.push_back(std::move(o));
        }
        return out;
    }

    std::string to_csv() const {
        std::ostringstream os;
        for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t k = 0; k < r.size(); ++k) {
                if (k) os << ',';
                os << scalar_text(r[k]);
            }
            os << '\n';
        }
        return os.str();
    }
};

void emit_text(const Common& c, const std::string& name, const std::string& text) {
    std::cout << text;
    if (!c.out.empty()) {
        std::filesystem::create_directories(c.out);
        std::ofstream(std::filesystem::path(c.out) / (name + "." + c.format)) << text;
    }
}

/// key,value lines; nested objects use dotted keys, arrays join with ';'.
void flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            flatten(*it, key, os);
        } else if (it->is_array()) {
            os << key << ',';
            for (std::size_t k = 0; k < it->size(); ++k) {
                const json& v = (*it)[k];
                os << (k ? ";" : "") << (v.is_structured() ? v.dump() : scalar_text(v));
            }
            os << '\n';
        } else {
            os << key << ',' << scalar_text(*it) << '\n';
        }
    }
}

/// A JSON record, or its flattened key,value form in csv mode.
void emit(const Common& c, const std::string& name, const json& record) {
    if (c.format == "json") {
        emit_text(c, name, record.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "key,value\n";
    flatten(record, "", os);
    emit_text(c, name, os.str());
}

void emit(const Common& c, const std::string& name, const Table& t) {
    emit_text(c, name, c.format == "csv" ? t.to_csv() : t.to_json().dump(2) + "\n");
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

HHMatrix load_hh(const std::string& file) { return io::hh_from_json(io::read_json_file(file), file + ": $"); }

Domain ball_for(const ScalarField& f, double radius) { return Domain::ball(f.n(), radius); }

// ---------------------------------------------------------------------------
// matrix commands
// ---------------------------------------------------------------------------

int det_moore(const Common& c, const std::string& file) {
    const HHMatrix a = load_hh(file);
    const MooreResult m = paired_eigenvalues(a);
    const double radius = m.eigenvalues.empty()
                              ? 0.0
                              : std::max(std::abs(m.eigenvalues.front()), std::abs(m.eigenvalues.back()));
    std::size_t rank = 0;
    for (double l : m.eigenvalues) rank += std::abs(l) > 1e-12 * radius;
    const double quartic = verify::detail::rel_diff(std::pow(m.value, 4), realify(a).determinant());
    emit(c, "det-moore",
         json{{"value", m.value},
              {"rank", rank},
              {"eigenvalues", m.eigenvalues},
              {"residuals", {{"pair_gap", m.max_pair_gap}, {"quartic", quartic}}}});
    return kPass;
}

int det_dieudonne(const Common& c, const std::string& file) {
    const io::ParsedMatrix p = io::parse_matrix_file(file);
    const DieudonneResult d = dieudonne(p.matrix);
    const double study = std::sqrt(std::abs(complexify(p.matrix).determinant()));
    json residuals{{"study", std::abs(d.value - study) / std::max(1.0, study)}};
    if (p.hyperhermitian) {
        const double m = std::abs(moore_det(HHMatrix::checked(p.matrix)));
        residuals["moore"] = verify::detail::rel_diff(d.value, m);
    }
    emit(c, "det-dieudonne", json{{"value", d.value}, {"rank", d.rank}, {"residuals", residuals}});
    return kPass;
}

int eig(const Common& c, const std::string& file) {
    const HHMatrix a = load_hh(file);
    const HHEigenDecomposition e = hh_eigen(a);
    QVector lam;
    for (double l : e.lambda) lam.emplace_back(l);
    const double recon = max_entry_diff(a.matrix() * e.C, e.C * QMatrix::diagonal(lam)) / (1.0 + a.max_entry_norm());
    const double ortho = max_entry_diff(conj_transpose(e.C) * e.C, QMatrix::identity(a.size()));
    emit(c, "eig",
         json{{"lambda", e.lambda},
              {"C", io::to_json(e.C)},
              {"residuals", {{"reconstruction", recon}, {"orthonormality", ortho}}}});
    return kPass;
}

int check_pd(const Common& c, const std::string& file) {
    const HHMatrix a = load_hh(file);
    const SylvesterResult s = sylvester(a);
    const double lo = min_eigenvalue(a);
    const char* syl = s.verdict == Definiteness::Positive      ? "positive"
                      : s.verdict == Definiteness::NotPositive ? "not-positive"
                                                               : "indeterminate";
    const bool agree = s.verdict == Definiteness::Indeterminate || s.positive_definite() == (lo > 0.0);
    emit(c, "check-pd",
         json{{"sylvester", syl},
              {"leading_minors", s.leading_minors},
              {"margin", s.margin},
              {"min_eigenvalue", lo},
              {"positive_definite", lo > 0.0},
              {"agree", agree}});
    return agree ? kPass : kFail;
}

int mixed(const Common& c, const std::vector<std::string>& files) {
    std::vector<HHMatrix> slots;
    for (const auto& f : files) {
        const json j = io::read_json_file(f);
        if (j.is_array() && !j.empty() && j[0].is_object()) {
            for (std::size_t k = 0; k < j.size(); ++k)
                slots.push_back(io::hh_from_json(j[k], f + ": $[" + std::to_string(k) + "]"));
        } else {
            slots.push_back(io::hh_from_json(j, f + ": $"));
        }
    }
    const double a = mixed_discriminant(slots);
    const double b = mixed_discriminant_interpolated(slots);
    emit(c, "mixed", json{{"value", a}, {"interpolated", b}, {"residual", std::abs(a - b)}});
    return kPass;
}

int aleksandrov(const Common& c, std::size_t n) {
    if (n < 2) throw DomainError("aleksandrov: n must be at least 2");
    Table t{{"sample-id", "lhs", "rhs", "gap"}, {}};
    bool ok = true;
    for (std::size_t k = 0; k < c.samples; ++k) {
        Rng rng(c.seed, "aleksandrov", k);
        std::vector<HHMatrix> fixed;
        for (std::size_t i = 0; i + 1 < n; ++i) fixed.push_back(random_pd(rng, n));
        const HHMatrix x = random_hh(rng, n);
        const AleksandrovCheck r = aleksandrov_inequality_check(fixed, x);
        ok = ok && r.gap >= -1e-9 * r.scale;
        t.rows.push_back({k, r.lhs, r.rhs, r.gap});
    }
    emit(c, "aleksandrov", t);
    return ok ? kPass : kFail;
}

// ---------------------------------------------------------------------------
// field commands
// ---------------------------------------------------------------------------

int psh_check(const Common& c, const std::string& file, double radius) {
    const ScalarField f = io::parse_field_file(file);
    const PshVerdict v = is_psh(f, ball_for(f, radius), c.samples, c.seed);
    Table t{{"seed", "estimate", "std_error", "verdict", "checked", "witness"}, {}};
    t.rows.push_back(
        {c.seed, v.min_eigenvalue, 0.0, verdict(v.psh), v.checked, v.psh ? std::string() : format_point(v.witness)});
    emit(c, "psh-check", t);
    return v.psh ? kPass : kFail;
}

int ma_pair_cmd(const Common& c, const std::string& file, const std::string& phi_file, double radius) {
    const ScalarField f = io::parse_field_file(file);
    const ScalarField phi = phi_file.empty() ? ScalarField::bump(QVector(f.n()), radius) : io::parse_field_file(phi_file);
    const Domain dom = ball_for(f, radius);
    const PshVerdict v = is_psh(f, dom, std::min(c.samples, kPshCheckSamples), derive_seed(c.seed, "ma-pair-psh"));
    const Estimate e = ma_pair(f, phi, dom, c.samples, c.seed);
    Table t{{"seed", "estimate", "std_error", "verdict"}, {}};
    t.rows.push_back({c.seed, e.value, e.std_error, verdict(v.psh)});
    emit(c, "ma-pair", t);
    return v.psh ? kPass : kFail;
}

int l_symmetry(const Common& c, const std::vector<std::string>& files, double radius) {
    std::vector<ScalarField> fields;
    for (const auto& f : files) fields.push_back(io::parse_field_file(f));
    const Domain dom = ball_for(fields.front(), radius);
    const PermutedEstimates p = l_functional_permutations(fields, dom, c.samples, c.seed);
    Table t{{"seed", "order", "estimate", "std_error", "verdict"}, {}};
    bool ok = true;
    const Estimate& ref = p.estimates.front();
    for (std::size_t o = 0; o < p.orders.size(); ++o) {
        std::string order;
        for (std::size_t v : p.orders[o]) order += std::to_string(v);
        const Estimate& e = p.estimates[o];
        const bool agree = std::abs(e.value - ref.value) <= 3.0 * std::hypot(e.std_error, ref.std_error);
        ok = ok && agree;
        t.rows.push_back({c.seed, order, e.value, e.std_error, verdict(agree)});
    }
    emit(c, "l-symmetry", t);
    return ok ? kPass : kFail;
}

int ma_converge(const Common& c, const std::string& field_file, const std::string& pert_file,
                const std::string& phi_file, const std::vector<int>& n_list, double radius) {
    const ScalarField f = field_file.empty() ? norm_squared_field(2) : io::parse_field_file(field_file);
    const QVector offset{Quaternion(0.3, 0.0, 0.0, 0.0), Quaternion(0.0, 0.0, 0.2, 0.0)};
    const ScalarField pert = pert_file.empty() ? 0.1 * ScalarField::bump(offset, 1.0) : io::parse_field_file(pert_file);
    const ScalarField phi = phi_file.empty() ? ScalarField::bump(QVector(f.n()), radius) : io::parse_field_file(phi_file);
    const ConvergenceTable table = convergence_experiment(f, pert, phi, ball_for(f, radius), n_list, c.samples, c.seed);
    Table t{{"seed", "N", "estimate", "std_error", "verdict", "pair_n", "pair_f", "sup_diff"}, {}};
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const bool last = r + 1 == table.rows.size();
        const bool ok = !last || (table.final_within && table.monotone);
        t.rows.push_back({c.seed, row.N, row.gap.value, row.gap.std_error, verdict(ok), row.pair_n.value,
                          row.pair_f.value, row.sup_diff});
    }
    emit(c, "ma-converge", t);
    return table.monotone && table.final_within ? kPass : kFail;
}

int min_principle(const Common& c, const std::string& u_file, const std::string& v_file, double radius) {
    const ScalarField u = io::parse_field_file(u_file);
    const ScalarField v = io::parse_field_file(v_file);
    const MinimumPrincipleResult r = minimum_principle_experiment(u, v, ball_for(u, radius), c.samples, c.samples, c.seed);
    Table t{{"seed", "estimate", "std_error", "verdict", "min_interior", "min_boundary", "tolerance"}, {}};
    t.rows.push_back(
        {c.seed, r.min_interior - r.min_boundary, 0.0, verdict(r.pass), r.min_interior, r.min_boundary, r.tolerance});
    emit(c, "min-principle", t);
    return r.pass ? kPass : kFail;
}

// ---------------------------------------------------------------------------
// radon and verify
// ---------------------------------------------------------------------------

int radon(const Common& c, std::size_t n, std::size_t basis_size, std::size_t planes) {
    if (n < 2) throw DomainError("radon: n must be at least 2");
    std::vector<QVector> centers;
    if (n == 2 && basis_size <= 64) {
        centers = verify::detail::lattice_centers();
        centers.resize(basis_size);
    } else {
        Rng rng(c.seed, "radon-centers");
        for (std::size_t k = 0; k < basis_size; ++k) {
            QVector q = random_qvector(rng, n);
            for (auto& e : q) e = e * 1.5;
            centers.push_back(std::move(q));
        }
    }
    std::vector<ScalarField> basis;
    for (const auto& ctr : centers) basis.push_back(ScalarField::gaussian(ctr, 1.0, 1.0));
    Rng rng(c.seed, "radon-planes");
    std::vector<Hyperplane> hp;
    for (std::size_t e = 0; e < planes; ++e) hp.push_back(random_hyperplane(rng, n, 2.0));
    const InjectivityCertificate cert = injectivity_certificate(basis, hp, c.samples, c.seed);
    emit(c, "radon", json{{"singular_values", cert.singular_values}, {"rank", cert.rank}, {"pass", cert.pass}});
    return cert.pass ? kPass : kFail;
}

int run_verify(const Common& c, const std::string& suite, double scale, double budget) {
    verify::Config cfg;
    cfg.seed = c.seed;
    cfg.scale = scale;
    cfg.budget_seconds = budget;
    const verify::SuiteReport r = verify::run_suite(suite, cfg);
    const verify::Counts n = r.counts();
    if (!c.out.empty()) {
        std::filesystem::create_directories(c.out);
        const std::filesystem::path dir(c.out);
        std::ofstream(dir / ("verify-" + suite + ".json")) << r.to_json().dump(2) << '\n';
        std::ofstream(dir / ("verify-" + suite + ".csv")) << r.to_csv();
        json summary{{"suite", r.suite},     {"seed", r.seed},       {"cases", n.total()},
                     {"passed", n.pass},     {"failed", n.fail},     {"skipped", n.skip},
                     {"verdict", verify::to_string(r.verdict())},   {"digest", verify::hex(r.digest())},
                     {"wall_seconds", r.wall_seconds}};
        std::cout << summary.dump(2) << '\n';
    } else if (c.format == "csv") {
        std::cout << r.to_csv();
    } else {
        std::cout << r.to_json().dump(2) << '\n';
    }
    std::fprintf(stderr, "%s: %s, %zu cases, %zu failed, %zu skipped, digest %s\n", suite.c_str(),
                 verify::to_string(r.verdict()), n.total(), n.fail, n.skip, verify::hex(r.digest()).c_str());
    return r.verdict() == verify::Verdict::Fail ? kFail : kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quaternionic determinants and plurisubharmonic functions"};
    app.require_subcommand(1);
    std::function<int()> action;

    // One Common per subcommand, so defaults do not leak between them.
    std::vector<std::unique_ptr<Common>> commons;
    auto common = [&](CLI::App* cmd, std::size_t samples, const std::string& format) -> Common& {
        commons.push_back(std::make_unique<Common>());
        add_common(cmd, *commons.back(), samples, format);
        return *commons.back();
    };

    std::string file, file2, file3;
    std::vector<std::string> files;
    double radius = 1.0;
    std::size_t n = 2, basis_size = 64, planes = 256;
    std::vector<int> n_list{1, 2, 4, 8, 16};
    std::string suite;
    double scale = 1.0, budget = 0.0;

    {
        auto* cmd = app.add_subcommand("det-moore", "Moore determinant of a hyperhermitian matrix");
        auto& c = common(cmd, 0, "json");
        cmd->add_option("matrix", file, "JSON matrix file")->required();
        cmd->callback([&] { action = [&] { return det_moore(c, file); }; });
    }
    {
        auto* cmd = app.add_subcommand("det-dieudonne", "Dieudonne determinant of a quaternionic matrix");
        auto& c = common(cmd, 0, "json");
        cmd->add_option("matrix", file, "JSON matrix file")->required();
        cmd->callback([&] { action = [&] { return det_dieudonne(c, file); }; });
    }
    {
        auto* cmd = app.add_subcommand("eig", "Eigen-decomposition of a hyperhermitian matrix");
        auto& c = common(cmd, 0, "json");
        cmd->add_option("matrix", file, "JSON matrix file")->required();
        cmd->callback([&] { action = [&] { return eig(c, file); }; });
    }
    {
        auto* cmd = app.add_subcommand("check-pd", "Sylvester and eigenvalue positivity tests");
        auto& c = common(cmd, 0, "json");
        cmd->add_option("matrix", file, "JSON matrix file")->required();
        cmd->callback([&] { action = [&] { return check_pd(c, file); }; });
    }
    {
        auto* cmd = app.add_subcommand("mixed", "Mixed discriminant of n hyperhermitian matrices");
        auto& c = common(cmd, 0, "json");
        cmd->add_option("matrices", files, "JSON matrix files, or one file holding an array")->required();
        cmd->callback([&] { action = [&] { return mixed(c, files); }; });
    }
    {
        auto* cmd = app.add_subcommand("aleksandrov", "Aleksandrov inequality on random instances");
        auto& c = common(cmd, 100, "csv");
        cmd->add_option("--n", n, "matrix size")->capture_default_str();
        cmd->callback([&] { action = [&] { return aleksandrov(c, n); }; });
    }
    {
        auto* cmd = app.add_subcommand("psh-check", "Sampled psh test of a field on a ball");
        auto& c = common(cmd, 4000, "csv");
        cmd->add_option("field", file, "JSON field file")->required();
        cmd->add_option("--radius", radius, "ball radius")->capture_default_str();
        cmd->callback([&] { action = [&] { return psh_check(c, file, radius); }; });
    }
    {
        auto* cmd = app.add_subcommand("ma-pair", "Integral of phi against the Monge-Ampere measure of f");
        auto& c = common(cmd, 100000, "csv");
        cmd->add_option("field", file, "JSON field file")->required();
        cmd->add_option("--phi", file2, "test function (default: bump on the ball)");
        cmd->add_option("--radius", radius, "ball radius")->capture_default_str();
        cmd->callback([&] { action = [&] { return ma_pair_cmd(c, file, file2, radius); }; });
    }
    {
        auto* cmd = app.add_subcommand("l-symmetry", "L(f_0, ..., f_n) under all permutations");
        auto& c = common(cmd, 100000, "csv");
        cmd->add_option("fields", files, "n + 1 JSON field files")->required();
        cmd->add_option("--radius", radius, "ball radius")->capture_default_str();
        cmd->callback([&] { action = [&] { return l_symmetry(c, files, radius); }; });
    }
    {
        auto* cmd = app.add_subcommand("ma-converge", "Monge-Ampere pairing along f + perturbation / N");
        auto& c = common(cmd, 100000, "csv");
        cmd->add_option("--field", file, "f (default: |q|^2 on H^2)");
        cmd->add_option("--perturbation", file2, "perturbation (default: 0.1 bump(0.3, 0.2j; 1))");
        cmd->add_option("--phi", file3, "test function (default: bump on the ball)");
        cmd->add_option("--N", n_list, "values of N")->delimiter(',')->capture_default_str();
        cmd->add_option("--radius", radius, "ball radius")->capture_default_str();
        cmd->callback([&] { action = [&] { return ma_converge(c, file, file2, file3, n_list, radius); }; });
    }
    {
        auto* cmd = app.add_subcommand("min-principle", "Sampled minimum principle for u - v on a ball");
        auto& c = common(cmd, 100000, "csv");
        cmd->add_option("u", file, "JSON field file")->required();
        cmd->add_option("v", file2, "JSON field file")->required();
        cmd->add_option("--radius", radius, "ball radius")->capture_default_str();
        cmd->callback([&] { action = [&] { return min_principle(c, file, file2, radius); }; });
    }
    {
        auto* cmd = app.add_subcommand("radon", "Injectivity certificate for Gaussian bases");
        auto& c = common(cmd, 2000, "json");
        cmd->add_option("--n", n, "quaternionic dimension")->capture_default_str();
        cmd->add_option("--basis", basis_size, "number of Gaussians")->capture_default_str();
        cmd->add_option("--planes", planes, "number of hyperplanes")->capture_default_str();
        cmd->callback([&] { action = [&] { return radon(c, n, basis_size, planes); }; });
    }
    {
        auto* cmd = app.add_subcommand("verify", "Run a verification suite");
        auto& c = common(cmd, 0, "json");
        cmd->add_option("suite", suite, "algebra, dieudonne, moore, spectral, mixed, psh, radon or all")->required();
        cmd->add_option("--scale", scale, "case and sample count multiplier")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--budget", budget, "seconds; later checks are skipped")->capture_default_str();
        cmd->callback([&] { action = [&] { return run_verify(c, suite, scale, budget); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        return action();
    } catch (const verify::UnknownSuite& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const NotHyperhermitian& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const SizeMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const Error& e) {
        std::fprintf(stderr, "failed: %s\n", e.what());
        return kFail;
    }
}
