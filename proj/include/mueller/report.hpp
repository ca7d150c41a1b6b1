#pragma once

// Full analysis of one matrix and its serialization.

#include "canonical.hpp"
#include "choi.hpp"
#include "conetest.hpp"
#include "core.hpp"
#include "io.hpp"
#include "witness.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace mueller {

struct Report {
    Matrix4 input = Matrix4::Zero();
    double tol = kDefaultTol;
    ConeVerdict pre_mueller;
    PhysicalityReport physicality;
    std::optional<JonesMatrix> mueller_jones;
    JonesEnsemble ensemble; ///< empty unless the matrix is Mueller
    CanonicalClass canonical;
    std::optional<ConstraintCheck> type1_binding;
    std::optional<bool> type2_satisfied;
    std::optional<TwoModeJones> witness;
    double witness_expectation = 0.0;

    bool is_mueller() const { return physicality.is_mueller; }
    bool is_pre_mueller() const { return pre_mueller.is_pre_mueller; }
};

/// Exit codes used with --verdict-exit.
enum class VerdictTier : int { Mueller = 0, PreMuellerOnly = 3, NotPreMueller = 4 };

inline VerdictTier verdict_tier(const Report& r)
{
    if (r.is_mueller() && r.is_pre_mueller()) return VerdictTier::Mueller;
    if (r.is_pre_mueller()) return VerdictTier::PreMuellerOnly;
    return VerdictTier::NotPreMueller;
}

inline Report analyze(const MuellerCandidate& m, double tol = kDefaultTol)
{
    Report r;
    r.input = m.matrix();
    r.tol = tol;
    r.pre_mueller = certify_cone(m, tol);
    r.physicality = physicality(m, tol);
    r.mueller_jones = mueller_jones_test(m, tol);
    if (r.physicality.is_mueller) r.ensemble = jones_ensemble(m, tol);
    r.canonical = classify(m, tol);
    if (r.canonical.d) {
        if (r.canonical.family == Family::TypeI) r.type1_binding = type1_constraint_check(*r.canonical.d, tol);
        if (r.canonical.family == Family::TypeII) r.type2_satisfied = type2_constraints(*r.canonical.d, tol);
    }
    r.witness = witness_certificate(m, tol);
    if (r.witness) r.witness_expectation = expectation(extended_action(m, witness_input()), *r.witness);
    return r;
}

// ---------------------------------------------------------------------------
// serialization

namespace detail {

template <typename Derived>
nlohmann::json real_array(const Eigen::MatrixBase<Derived>& v)
{
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(sig12(v(i)));
    return out;
}

inline nlohmann::json complex_json(const Complex& z) { return {sig12(z.real()), sig12(z.imag())}; }

inline nlohmann::json jones_json(const JonesMatrix& j)
{
    return {{complex_json(j.j(0, 0)), complex_json(j.j(0, 1))}, {complex_json(j.j(1, 0)), complex_json(j.j(1, 1))}};
}

} // namespace detail

inline nlohmann::json to_json(const Report& r)
{
    using nlohmann::json;
    json out;

    json echo = json::array();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) echo.push_back(sig12(r.input(i, j)));
    out["input_echo"] = echo;

    out["pre_mueller"] = {{"verdict", r.pre_mueller.is_pre_mueller},
                          {"intensity_margin", sig12(r.pre_mueller.intensity_margin)},
                          {"lorentz_margin", sig12(r.pre_mueller.lorentz_margin)},
                          {"worst_input", detail::real_array(r.pre_mueller.worst_input)}};

    out["physicality"] = {{"eigenvalues", detail::real_array(r.physicality.eigenvalues)},
                          {"min_eigenvalue", sig12(r.physicality.min_eigenvalue)},
                          {"verdict", r.physicality.is_mueller},
                          {"rank", r.physicality.rank}};

    out["mueller_jones"] = {{"verdict", r.mueller_jones.has_value()},
                            {"jones", r.mueller_jones ? detail::jones_json(*r.mueller_jones) : json(nullptr)}};

    json ens = json::array();
    for (const auto& item : r.ensemble.items)
        ens.push_back({{"weight", sig12(item.weight)}, {"jones", detail::jones_json(item.jones)}});
    out["ensemble"] = ens;

    json canon = {{"family", to_string(r.canonical.family)},
                  {"d", r.canonical.d ? detail::real_array(*r.canonical.d) : json(nullptr)},
                  {"binding_constraint", nullptr}};
    if (r.type1_binding) {
        canon["binding_constraint"] = {{"satisfied", r.type1_binding->satisfied},
                                       {"position", r.type1_binding->position},
                                       {"formula", r.type1_binding->formula},
                                       {"violation", sig12(r.type1_binding->violation)}};
    } else if (r.type2_satisfied) {
        canon["binding_constraint"] = {{"satisfied", *r.type2_satisfied},
                                       {"formula", "d3 = d2 and d2^2 <= d0*d1"}};
    }
    if (!r.canonical.diagnostics.empty()) canon["diagnostics"] = r.canonical.diagnostics;
    out["canonical"] = canon;

    json wit = {{"present", r.witness.has_value()}, {"vector", nullptr}, {"expectation", nullptr}};
    if (r.witness) {
        json vec = json::array();
        for (int i = 0; i < 4; ++i) vec.push_back(detail::complex_json(r.witness->e[i]));
        wit["vector"] = vec;
        wit["expectation"] = sig12(r.witness_expectation);
    }
    out["witness"] = wit;
    return out;
}

inline std::string summary(const Report& r)
{
    std::ostringstream os;
    os.precision(6);
    os << "pre-Mueller : " << (r.is_pre_mueller() ? "yes" : "no") << "  (intensity margin "
       << r.pre_mueller.intensity_margin << ", lorentz margin " << r.pre_mueller.lorentz_margin << ")\n";
    os << "Mueller     : " << (r.is_mueller() ? "yes" : "no") << "  (H eigenvalues";
    for (int i = 0; i < 4; ++i) os << ' ' << r.physicality.eigenvalues[i];
    os << ", rank " << r.physicality.rank << ")\n";
    os << "Jones system: " << (r.mueller_jones ? "yes" : "no") << '\n';
    if (!r.ensemble.items.empty()) os << "ensemble    : " << r.ensemble.size() << " Jones system(s)\n";
    os << "family      : " << to_string(r.canonical.family);
    if (r.canonical.d) os << "  d = (" << (*r.canonical.d)[0] << ", " << (*r.canonical.d)[1] << ", "
                          << (*r.canonical.d)[2] << ", " << (*r.canonical.d)[3] << ")";
    os << '\n';
    if (r.type1_binding && !r.type1_binding->satisfied)
        os << "violated    : inequality " << r.type1_binding->position << " (" << r.type1_binding->formula
           << ") by " << r.type1_binding->violation << '\n';
    if (r.witness) os << "witness     : entangled input exposes expectation " << r.witness_expectation << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// batch

struct BatchEntry {
    std::string path;
    std::variant<Report, std::string> result; ///< report or parse error message
};

/// Analyzes every regular file in `dir` (sorted by name) concurrently.
inline std::vector<BatchEntry> analyze_directory(const std::string& dir, double tol = kDefaultTol)
{
    namespace fs = std::filesystem;
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());

    std::vector<std::future<BatchEntry>> jobs;
    jobs.reserve(paths.size());
    for (const auto& p : paths)
        jobs.push_back(std::async(std::launch::async, [p, tol]() -> BatchEntry {
            try {
                return {p, analyze(MuellerCandidate(read_matrix_file(p)), tol)};
            } catch (const ParseError& e) {
                return {p, std::string(e.what())};
            }
        }));
    std::vector<BatchEntry> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

} // namespace mueller
