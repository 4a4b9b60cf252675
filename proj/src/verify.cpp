#include "mctree/verify.hpp"

#include "mctree/error.hpp"
#include "mctree/formulas.hpp"
#include "mctree/io.hpp"
#include "mctree/law.hpp"
#include "mctree/linalg.hpp"
#include "mctree/random_chain.hpp"
#include "mctree/serialize.hpp"
#include "mctree/support.hpp"
#include "mctree/wilson.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace mctree {

namespace {

std::string str(const Rational& x) { return to_string(x); }

Json chain_document(const TransitionMatrix& p) { return chain_to_json({p, default_labels(p.size())}); }

Json laplacian_document(const SquareMatrix& l) { return Json{{"laplacian", matrix_json(l)}}; }

class Context {
  public:
    Context(SuiteReport& report, const VerifyOptions& opts, std::uint64_t suite_id, std::size_t trials,
            std::size_t min_n, std::size_t max_n)
        : report_(report), opts_(opts), suite_id_(suite_id), trials_(trials), min_n_(min_n), max_n_(max_n) {}

    const VerifyOptions& opts() const { return opts_; }
    std::size_t trials() const { return trials_; }
    std::size_t max_n() const { return max_n_; }

    // Sizes cycle through min_n..max_n so every size is covered.
    std::size_t size_for(std::size_t trial) const { return min_n_ + trial % (max_n_ - min_n_ + 1); }
    Rng rng_for(std::size_t trial) const { return Rng(opts_.seed, (suite_id_ << 32) | trial); }

    bool check(bool ok, std::size_t trial, std::size_t size, const std::function<Json()>& input,
               const std::function<std::string()>& detail) {
        ++report_.checks;
        if (ok)
            return true;
        ++report_.failures;
        auto& ce = report_.counterexample;
        if (!ce || size < ce->size)
            ce = Counterexample{trial, size, input(), detail()};
        return false;
    }

    bool check(bool ok, std::size_t trial, const TransitionMatrix& p, const std::function<std::string()>& detail) {
        return check(ok, trial, p.size(), [&] { return chain_document(p); }, detail);
    }

    void note(std::string text) { report_.notes.push_back(std::move(text)); }
    void count_trial() { ++report_.trials; }

  private:
    SuiteReport& report_;
    const VerifyOptions& opts_;
    std::uint64_t suite_id_;
    std::size_t trials_;
    std::size_t min_n_;
    std::size_t max_n_;
};

std::vector<StateSet> nonempty_subsets(std::size_t n, bool proper) {
    std::vector<StateSet> out;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t mask = 1; mask <= full; ++mask)
        if (!proper || mask != full)
            out.push_back(StateSet::from_mask(mask));
    return out;
}

// -- exact identity suites -------------------------------------------------

void kirchhoff_suite(Context& ctx) {
    for (std::size_t t = 0; t < ctx.trials(); ++t) {
        Rng rng = ctx.rng_for(t);
        const TransitionMatrix p = random_chain(rng, ctx.size_for(t));
        ctx.count_trial();
        const ForestSums fs = forest_sums(p, ctx.opts().guard);
        for (const StateSet& r : nonempty_subsets(p.size(), false)) {
            Rational w = fs.w_of(r);
            if (ctx.opts().inject_fault)
                w += Rational(1, 1000);
            const Rational d = exact_det(reduced_laplacian(p, r));
            ctx.check(d == w, t, p, [&] {
                return "det L(R) = " + str(d) + " but w(R) = " + str(w) + " for R = " + to_string(r);
            });
        }
    }
}

void green_suite(Context& ctx) {
    for (std::size_t t = 0; t < ctx.trials(); ++t) {
        Rng rng = ctx.rng_for(t);
        const TransitionMatrix p = random_chain(rng, ctx.size_for(t));
        ctx.count_trial();
        const ForestSums fs = forest_sums(p, ctx.opts().guard);
        for (const StateSet& r : nonempty_subsets(p.size(), true)) {
            const auto free = r.complement(p.size());
            const Rational& w = fs.w_of(r);
            if (sgn(w) == 0) {
                bool refused = false;
                try {
                    green_matrix_solve(p, r);
                } catch (const InfeasibleRoots&) {
                    refused = true;
                }
                ctx.check(refused, t, p, [&] { return "w(R) = 0 but L(R) solved for R = " + to_string(r); });
                continue;
            }
            const SquareMatrix g = green_matrix_solve(p, r);
            const RationalMatrix h = hitting_solve(p, r);
            for (std::size_t a = 0; a < free.size(); ++a) {
                for (std::size_t b = 0; b < free.size(); ++b) {
                    const Rational tree = fs.w_target(r, free[a], free[b]) / w;
                    ctx.check(tree == g(a, b), t, p, [&] {
                        return "Green entry (" + std::to_string(free[a]) + "," + std::to_string(free[b]) + ") for R = " +
                               to_string(r) + ": forests " + str(tree) + ", solve " + str(g(a, b));
                    });
                }
                std::size_t c = 0;
                for (State j : r) {
                    const Rational tree = fs.w.at(r).to_root(free[a], j) / w;
                    ctx.check(tree == h(a, c), t, p, [&] {
                        return "hitting P_" + std::to_string(free[a]) + "(X_T = " + std::to_string(j) + ") for R = " +
                               to_string(r) + ": forests " + str(tree) + ", solve " + str(h(a, c));
                    });
                    ++c;
                }
            }
        }
        // The public per-entry functions against the same oracle, on R = {0}.
        const StateSet r0{0};
        if (p.size() >= 2 && sgn(fs.w_of(r0)) > 0) {
            const AbsorptionAnalysis aa = absorption_analysis(p, r0, ctx.opts().guard);
            const SquareMatrix g = green_matrix_solve(p, r0);
            ctx.check(aa.green == g, t, p, [] { return std::string("absorption_analysis Green matrix differs from solve"); });
            const State i = aa.free.front();
            Rational row = 0;
            for (std::size_t b = 0; b < aa.free.size(); ++b)
                row += g(0, b);
            const Rational m = mean_hitting_time(p, r0, i, ctx.opts().guard);
            ctx.check(m == row, t, p, [&] { return "mean hitting time " + str(m) + " vs Green row sum " + str(row); });
        }
    }
    // Uniform chain U(6) with two absorbing targets.
    const TransitionMatrix u6 = fixtures::uniform(6);
    const SquareMatrix g = green_matrix_solve(u6, StateSet{0, 1});
    bool shape = true;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            const Rational expect = a == b ? Rational(3, 2) : Rational(1, 2);
            const Rational tree = green_occupation(u6, StateSet{0, 1}, a + 2, b + 2);
            shape = shape && g(a, b) == expect && tree == expect;
        }
    ctx.check(shape, 0, u6, [] { return std::string("U(6), R = {0,1}: Green matrix is not 3/2 on / 1/2 off the diagonal"); });
}

// The two- and three-state closed forms for m_ij.
Rational symbolic_mfpt(const TransitionMatrix& p, State i, State j) {
    if (p.size() == 2)
        return 1 / p(i, j);
    const State k = 3 - i - j;
    return (p(i, k) + p(k, i) + p(k, j)) / (p(i, k) * p(k, j) + p(k, i) * p(i, j) + p(i, j) * p(k, j));
}

void kemeny_suite(Context& ctx) {
    for (std::size_t t = 0; t < ctx.trials(); ++t) {
        Rng rng = ctx.rng_for(t);
        const TransitionMatrix p = random_chain(rng, ctx.size_for(t), {.irreducible = true});
        ctx.count_trial();
        const std::size_t n = p.size();
        const ChainAnalysis a = analyze_chain(p, ctx.opts().guard);
        const auto pi = stationary_solve(p);
        const RationalMatrix m = mfpt_solve(p);
        const Rational trace = kemeny_trace(p);
        ctx.check(a.pi == pi, t, p, [] { return std::string("stationary law differs from solve"); });
        for (State i = 0; i < n; ++i)
            for (State j = 0; j < n; ++j) {
                ctx.check(a.mfpt(i, j) == m(i, j), t, p, [&] {
                    return "m_" + std::to_string(i) + std::to_string(j) + ": trees " + str(a.mfpt(i, j)) + ", solve " +
                           str(m(i, j));
                });
                if (i != j && n <= 3) {
                    const Rational closed = symbolic_mfpt(p, i, j);
                    ctx.check(closed == a.mfpt(i, j), t, p, [&] {
                        return "closed form m_" + std::to_string(i) + std::to_string(j) + " = " + str(closed);
                    });
                }
                if (i != j) {
                    const Rational deleted = sigma_pair(p, i, j, PairMethod::tree_deletion, ctx.opts().guard);
                    const Rational forests = sigma_pair(p, i, j, PairMethod::two_forest, ctx.opts().guard);
                    ctx.check(deleted == forests, t, p, [&] {
                        return "Sigma_ij by tree deletion " + str(deleted) + ", by two-forests " + str(forests);
                    });
                }
            }
        for (State i = 0; i < n; ++i) {
            Rational k = 0;
            for (State j = 0; j < n; ++j)
                k += a.mfpt(i, j) / a.mfpt(j, j);
            ctx.check(k == a.kemeny, t, p, [&] {
                return "sum_j m_ij/m_jj from " + std::to_string(i) + " = " + str(k) + ", K = " + str(a.kemeny);
            });
        }
        ctx.check(trace == a.kemeny, t, p, [&] { return "trace Z = " + str(trace) + ", K = " + str(a.kemeny); });
    }
}

void chung_suite(Context& ctx) {
    for (std::size_t t = 0; t < ctx.trials(); ++t) {
        Rng rng = ctx.rng_for(t);
        const TransitionMatrix p = random_chain(rng, ctx.size_for(t), {.irreducible = true});
        ctx.count_trial();
        const std::size_t n = p.size();
        const ForestSums fs = forest_sums(p, ctx.opts().guard);
        const ChainAnalysis a = analyze_chain(p, ctx.opts().guard);
        for (State k = 0; k < n; ++k)
            for (State i = 0; i < n; ++i)
                for (State j = 0; j < n; ++j) {
                    if (i == k || j == k)
                        continue;
                    Rational c = a.mfpt(i, k) + a.mfpt(k, j);
                    if (i != j)
                        c -= a.mfpt(i, j);
                    c /= a.mfpt(j, j);
                    const Rational g = fs.w_target(StateSet{k}, i, j) / fs.w_of(StateSet{k});
                    ctx.check(c == g, t, p, [&] {
                        return "Chung (i,j,k) = (" + std::to_string(i) + "," + std::to_string(j) + "," +
                               std::to_string(k) + "): " + str(c) + " vs Green " + str(g);
                    });
                }
        if (n >= 2) {
            const Rational direct = chung_occupation(p, 1, 1, 0, ctx.opts().guard);
            const Rational g = green_occupation(p, StateSet{0}, 1, 1, ctx.opts().guard);
            ctx.check(direct == g, t, p, [&] { return "chung_occupation(1,1,0) = " + str(direct) + ", Green " + str(g); });
        }
        // The modified chain with row j replaced by a jump to i.
        for (State i = 0; i < n; ++i)
            for (State j = 0; j < n; ++j) {
                if (i == j)
                    continue;
                const ModifiedChainMfpt mod = modified_chain_mfpt(p, i, j, ctx.opts().guard);
                ctx.check(mod.mfpt() == a.mfpt(i, j) && mod.sigma_tilde_j * mod.w_class == fs.sigma[j] &&
                              mod.sigma_tilde_others * mod.w_class == fs.sigma_pair(i, j),
                          t, p, [&] {
                              return "modified chain for (" + std::to_string(i) + "," + std::to_string(j) + ") gives " +
                                     str(mod.mfpt()) + " vs m_ij = " + str(a.mfpt(i, j));
                          });
            }
    }
}

void treealg_suite(Context& ctx) {
    for (std::size_t t = 0; t < ctx.trials(); ++t) {
        Rng rng = ctx.rng_for(t);
        const TransitionMatrix p = random_chain(rng, ctx.size_for(t), {.irreducible = true});
        ctx.count_trial();
        const std::size_t n = p.size();
        const ForestSums fs = forest_sums(p, ctx.opts().guard);
        const auto& s = fs.sigma;
        const auto& pair = fs.sigma_pair;
        for (State i = 0; i < n; ++i)
            for (State k = 0; k < n; ++k) {
                if (i == k)
                    continue;
                const Rational lhs = fs.w.at(StateSet{k, i}).to_root(i, i) * fs.sigma1;
                const Rational rhs = pair(i, k) * s[i] + pair(k, i) * s[k];
                ctx.check(lhs == rhs, t, p, [&] {
                    return "w_ii({k,i}) Sigma = Sigma_ik Sigma_i + Sigma_ki Sigma_k fails at (i,k) = (" +
                           std::to_string(i) + "," + std::to_string(k) + ")";
                });
                for (State j = 0; j < n; ++j) {
                    if (j == i || j == k)
                        continue;
                    const Rational l2 = fs.w.at(StateSet{k, j}).to_root(i, j) * fs.sigma1 + pair(i, j) * s[k];
                    const Rational r2 = pair(i, k) * s[j] + pair(k, j) * s[k];
                    ctx.check(l2 == r2, t, p, [&] {
                        return "second tree-algebra identity fails at (i,j,k) = (" + std::to_string(i) + "," +
                               std::to_string(j) + "," + std::to_string(k) + ")";
                    });
                }
            }
        // Splitting off the edge out of j.
        for (const StateSet& r : nonempty_subsets(n, true))
            for (State j : r.complement(n)) {
                const StateSet rj = r.with(j);
                Rational rhs = fs.w_of(r);
                for (State k : r.complement(n))
                    rhs += p(j, k) * fs.w.at(rj).to_root(k, j);
                ctx.check(fs.w_of(rj) == rhs, t, p, [&] {
                    return "w(R u {j}) split fails for R = " + to_string(r) + ", j = " + std::to_string(j);
                });
            }
        for (State j = 0; j < n; ++j) {
            Rational flow = 0;
            for (State i = 0; i < n; ++i)
                flow += s[i] * p(i, j);
            ctx.check(flow == s[j], t, p, [&] { return "sum_i Sigma_i p_ij != Sigma_j at j = " + std::to_string(j); });
        }

        // Feasibility and irreducibility on a chain that may be reducible.
        const TransitionMatrix q = random_chain(rng, n);
        for (const StateSet& r : nonempty_subsets(n, false)) {
            const FeasibilityReport f = feasibility(q, r, ctx.opts().guard);
            ctx.check(f.consistent(), t, q, [&] { return "feasibility conditions disagree for R = " + to_string(r); });
        }
        const TreeSums qs = sigma_sums(q, ctx.opts().guard);
        bool all_positive = true;
        for (const auto& x : qs.sigma)
            all_positive = all_positive && sgn(x) > 0;
        ctx.check(all_positive == !unreachable_pair(q).has_value(), t, q,
                  [] { return std::string("graph irreducibility disagrees with positivity of every Sigma_j"); });
    }
}

void cayley_suite(Context& ctx) {
    for (std::size_t n = 1; n <= ctx.max_n(); ++n) {
        ctx.count_trial();
        for (std::size_t k = 1; k <= n; ++k) {
            std::vector<State> first(k), last(k);
            for (std::size_t a = 0; a < k; ++a) {
                first[a] = a;
                last[a] = n - k + a;
            }
            for (const auto& roots : {StateSet(first), StateSet(last)}) {
                std::size_t count = 0;
                for_each_forest(n, roots, [&](std::span<const State>) { ++count; }, ctx.opts().guard);
                const Integer expect = cayley_count(n, k);
                ctx.check(Integer(static_cast<unsigned long>(count)) == expect, n, n,
                          [&] { return Json{{"cayley", {n, k}}}; },
                          [&] {
                              return "enumerated " + std::to_string(count) + " forests, closed form " + expect.get_str();
                          });
            }
            if (k + 2 <= n) {
                const Integer lhs = cayley_count(n, k + 1) * static_cast<unsigned long>(k * n);
                const Integer rhs = cayley_count(n, k) * static_cast<unsigned long>(k + 1);
                ctx.check(lhs == rhs, n, n, [&] { return Json{{"cayley", {n, k}}}; },
                          [] { return std::string("Cayley recursion fails"); });
            }
        }
    }
}

Matrix<double> to_doubles(const RationalMatrix& m) {
    Matrix<double> d(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            d(i, j) = to_double(m(i, j));
    return d;
}

Matrix<double> power(Matrix<double> base, std::size_t e) {
    Matrix<double> out = Matrix<double>::identity(base.rows());
    for (; e; e >>= 1) {
        if (e & 1)
            out = out * base;
        base = base * base;
    }
    return out;
}

// With F the Cesaro limit, P^k - F = (P - F)^k for k >= 1, so the average
// error has the closed form (1/N) G (I - G^N) (I - P + F)^-1 with G = P - F.
// This holds for no other F, which makes it a check on the forest formula
// that does not depend on how fast a particular chain mixes.
void cesaro_suite(Context& ctx) {
    constexpr std::size_t steps = 10000;
    double worst_scaled = 0;
    for (std::size_t t = 0; t < ctx.trials(); ++t) {
        Rng rng = ctx.rng_for(t);
        const TransitionMatrix p = random_chain(rng, ctx.size_for(t));
        ctx.count_trial();
        const std::size_t n = p.size();
        const RationalMatrix f = cesaro_forest_matrix(p, ctx.opts().guard);
        for (State i = 0; i < n; ++i) {
            Rational row = 0;
            for (State j = 0; j < n; ++j)
                row += f(i, j);
            ctx.check(row == 1, t, p, [&] { return "forest limit row " + std::to_string(i) + " sums to " + str(row); });
        }
        const RationalMatrix& pe = p.entries();
        ctx.check(pe * f == f && f * pe == f && f * f == f, t, p,
                  [] { return std::string("forest limit F fails PF = FP = F^2 = F"); });
        SquareMatrix shifted = SquareMatrix::identity(n) - pe + f;
        SquareMatrix z;
        try {
            z = exact_inverse(shifted);
        } catch (const std::domain_error&) {
            ctx.check(false, t, p, [] { return std::string("I - P + F is singular"); });
            continue;
        }
        const Matrix<double> g = to_doubles(pe - f);
        const Matrix<double> predicted = g * (Matrix<double>::identity(n) - power(g, steps)) * to_doubles(z);
        const Matrix<double> avg = cesaro_average(p, steps);
        const Matrix<double> fd = to_doubles(f);
        double residual = 0, dist = 0;
        for (State i = 0; i < n; ++i)
            for (State j = 0; j < n; ++j) {
                const double err = avg(i, j) - fd(i, j);
                dist = std::max(dist, std::abs(err));
                residual = std::max(residual, std::abs(err - predicted(i, j) / steps));
            }
        worst_scaled = std::max(worst_scaled, dist * steps);
        ctx.check(residual < 1e-9, t, p, [&] {
            std::ostringstream os;
            os << "Cesaro average at N = " << steps << " departs from the closed-form error by " << residual;
            return os.str();
        });
    }
    std::ostringstream os;
    os << "largest N * |A_N - F| = " << worst_scaled;
    ctx.note(os.str());
}

void series_suite(Context& ctx) {
    constexpr std::size_t terms = 500;
    double worst = 0;
    for (std::size_t t = 0; t < ctx.trials(); ++t) {
        Rng rng = ctx.rng_for(t);
        const TransitionMatrix p = random_chain(rng, ctx.size_for(t), {.aperiodic = true});
        ctx.count_trial();
        const double exact = to_double(sigma_sums(p, ctx.opts().guard).sigma1);
        const double series = sigma1_series(p, terms);
        const double rel = std::abs(series - exact) / exact;
        worst = std::max(worst, rel);
        ctx.check(rel < 1e-6, t, p, [&] {
            std::ostringstream os;
            os << "series gives " << series << ", forests give " << exact << " (relative error " << rel << ")";
            return os.str();
        });
    }
    for (const TransitionMatrix& periodic : {fixtures::two_cycle(),
                                             TransitionMatrix{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}}) {
        bool refused = false;
        try {
            sigma1_series(periodic, terms);
        } catch (const PeriodicChain&) {
            refused = true;
        }
        ctx.check(refused, 0, periodic, [] { return std::string("periodic chain accepted by the series"); });
    }
    std::ostringstream os;
    os << "max relative error " << worst;
    ctx.note(os.str());
}

void spectral_suite(Context& ctx) {
    for (std::size_t t = 0; t < ctx.trials(); ++t) {
        Rng rng = ctx.rng_for(t);
        const std::size_t n = ctx.size_for(t);
        const SquareMatrix l = random_symmetric_laplacian(rng, n);
        ctx.count_trial();
        const auto doc = [&] { return laplacian_document(l); };
        const IdentitySides temp = temperley_check(l);
        ctx.check(temp.holds(), t, n, doc, [&] {
            return "Temperley: cofactor " + str(temp.lhs) + ", det(L + J)/n^2 " + str(temp.rhs);
        });
        const IdentitySides minors = minor_product_check(l);
        ctx.check(minors.holds(), t, n, doc, [&] {
            return "minor sum: cofactor " + str(minors.lhs) + ", mean principal minor " + str(minors.rhs);
        });
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const Rational c = cofactor(l, i, j);
                ctx.check(c == temp.lhs, t, n, doc, [&] {
                    return "cofactor (" + std::to_string(i) + "," + std::to_string(j) + ") = " + str(c);
                });
            }
    }
    for (std::size_t n = 2; n <= 4; ++n)
        for (std::size_t m = 3; n * m <= 12; ++m) {
            const Integer closed = prism_tree_count(n, m);
            const Rational det = undirected_tree_count(prism_graph(n, m));
            ctx.check(Rational(closed) == det, 0, n * m, [&] { return Json{{"prism", {n, m}}}; }, [&] {
                return "prism count " + closed.get_str() + ", determinant " + str(det);
            });
        }
}

// -- sampler suite -----------------------------------------------------------

GofReport sample_forest_law(const TransitionMatrix& p, const StateSet& roots, std::uint64_t seed, SiteOrder order,
                            std::size_t samples, double significance) {
    const ExactLaw law = forest_law(p, roots);
    LawTally tally(law);
    WilsonSampler sampler(p, seed, order);
    for (std::size_t k = 0; k < samples; ++k)
        tally.add(sampler.forest(roots).parents());
    return tally.test(significance);
}

void wilson_suite(Context& ctx) {
    const auto& o = ctx.opts();
    std::uint64_t stream = 1000;
    auto seed = [&] { return splitmix64(o.seed ^ splitmix64(++stream)); };
    auto record = [&](const GofReport& r, std::size_t trial, const TransitionMatrix& p, const std::string& what) {
        ctx.check(r.passed(), trial, p, [&] { return what + ": " + r.summary(); });
    };

    // Uniform trees on U(4).
    const TransitionMatrix u4 = fixtures::uniform(4);
    const GofReport uniform = sample_forest_law(u4, StateSet{0}, seed(), SiteOrder::increasing, o.samples, o.significance);
    record(uniform, 0, u4, "U(4) trees rooted at 0");
    ctx.note("U(4): " + uniform.summary());

    std::size_t passes = 0;
    for (std::size_t t = 0; t < ctx.trials(); ++t) {
        Rng rng = ctx.rng_for(t);
        const TransitionMatrix p = random_chain(rng, ctx.size_for(t), {.irreducible = true});
        ctx.count_trial();
        const std::size_t n = p.size();
        const State root = static_cast<State>(rng.below(n));
        const StateSet roots{root};

        // Tree law and, from the same draws, the first loop-erased branch.
        const ExactLaw law = forest_law(p, roots);
        LawTally tally(law);
        const State first = roots.complement(n).front();
        const auto paths = self_avoiding_paths(n, roots, first);
        std::vector<double> branch_prob;
        for (const auto& path : paths)
            branch_prob.push_back(to_double(lerw_path_prob(p, roots, path)));
        std::vector<std::uint64_t> branch_count(paths.size(), 0);
        WilsonSampler sampler(p, seed());
        for (std::size_t k = 0; k < o.samples; ++k) {
            const RootedForest f = sampler.forest(roots);
            tally.add(f.parents());
            const PathTrace branch{f.path_to_root(first)};
            const auto it = std::find(paths.begin(), paths.end(), branch);
            if (it == paths.end())
                throw std::logic_error("sampled branch is not a self-avoiding path into R");
            ++branch_count[it - paths.begin()];
        }
        const GofReport tree = tally.test(o.significance);
        passes += tree.passed();
        record(tree, t, p, "tree law rooted at " + std::to_string(root));
        record(gof_test(branch_count, branch_prob, o.significance), t, p,
               "first branch from " + std::to_string(first) + " against the loop-erased path law");
    }
    ctx.note(std::to_string(passes) + "/" + std::to_string(ctx.trials()) + " random tree laws pass");

    // Loop-erased path probabilities sum to one, exactly.
    for (std::size_t t = 0; t < ctx.trials(); ++t) {
        Rng rng = ctx.rng_for(t + ctx.trials());
        const std::size_t n = 2 + t % 4;
        const TransitionMatrix p = random_chain(rng, n);
        for (const StateSet& r : nonempty_subsets(n, true)) {
            if (!reaches(p, r))
                continue;
            for (State i : r.complement(n)) {
                Rational total = 0;
                for (const auto& path : self_avoiding_paths(n, r, i))
                    total += lerw_path_prob(p, r, path);
                ctx.check(total == 1, t, p, [&] {
                    return "loop-erased path probabilities from " + std::to_string(i) + " into " + to_string(r) +
                           " sum to " + str(total);
                });
            }
        }
    }

    // Site order does not change the law.
    {
        Rng rng = ctx.rng_for(1u << 20);
        const TransitionMatrix p = random_chain(rng, 4, {.irreducible = true});
        record(sample_forest_law(p, StateSet{0}, seed(), SiteOrder::decreasing, o.samples, o.significance), 0, p,
               "decreasing site order");
    }

    // alpha == 0 reproduces the forest law.
    {
        Rng rng = ctx.rng_for((1u << 20) + 1);
        const TransitionMatrix p = random_chain(rng, 4, {.irreducible = true});
        const StateSet roots{0, 2};
        const ExactLaw law = forest_law(p, roots);
        LawTally tally(law);
        WilsonSampler sampler(p, seed());
        const CycleWeights zero = CycleWeights::constant(0);
        for (std::size_t k = 0; k < o.samples; ++k)
            tally.add(sampler.cycle_rooted(zero, roots).successors());
        record(tally.test(o.significance), 0, p, "alpha = 0 against the forest law");
        const EcSums ec = w_ec_sums(p, zero, roots);
        ctx.check(ec.total == w_sum(p, roots) && ec.to_root == rooted_weights(p, roots).to_root, 0, p,
                  [] { return std::string("w^ec with alpha = 0 differs from w"); });
    }

    // alpha == 1 on U(3), R empty: the 27 functional maps.
    {
        const TransitionMatrix u3 = fixtures::uniform(3);
        const CycleWeights one = CycleWeights::constant(1);
        const ExactLaw law = ecrsf_law(u3, one, StateSet{});
        LawTally tally(law);
        WilsonSampler sampler(u3, seed());
        for (std::size_t k = 0; k < o.samples; ++k)
            tally.add(sampler.cycle_rooted(one, StateSet{}).successors());
        record(tally.test(o.significance), 0, u3, "U(3) cycle-rooted forests, alpha = 1");
    }

    // alpha == 1: where the branch from i ends against w^ec ratios.
    {
        Rng rng = ctx.rng_for((1u << 20) + 2);
        const TransitionMatrix p = random_chain(rng, 4, {.irreducible = true});
        const StateSet roots{3};
        const State i = 0;
        const StoppedDistribution exact = ecrsf_stopped_distribution(p, roots, i);
        std::vector<double> expected{to_double(exact.at_root[0]), to_double(1 - exact.before_loop)};
        std::vector<std::uint64_t> observed(2, 0);
        WilsonSampler sampler(p, seed());
        const CycleWeights one = CycleWeights::constant(1);
        for (std::size_t k = 0; k < o.samples; ++k)
            ++observed[sampler.cycle_rooted(one, roots).root_of(i) == 3 ? 0 : 1];
        record(gof_test(observed, expected, o.significance), 0, p, "alpha = 1 stopped distribution");
    }

    // Same seed, same stream.
    {
        WilsonSampler a(u4, o.seed), b(u4, o.seed);
        bool same = true;
        for (int k = 0; k < 100; ++k)
            same = same && a.tree(0) == b.tree(0);
        ctx.check(same, 0, u4, [] { return std::string("identical seeds gave different samples"); });
    }
}

struct SuiteSpec {
    const char* name;
    std::size_t trials;
    std::size_t min_n;
    std::size_t max_n;
    void (*run)(Context&);
};

const SuiteSpec suites[] = {
    {"kirchhoff", 200, 2, 6, kirchhoff_suite}, {"green", 200, 2, 6, green_suite},
    {"kemeny", 200, 2, 6, kemeny_suite},       {"chung", 100, 2, 5, chung_suite},
    {"treealg", 100, 3, 5, treealg_suite},     {"cayley", 1, 1, 7, cayley_suite},
    {"cesaro", 50, 2, 5, cesaro_suite},        {"series", 50, 2, 6, series_suite},
    {"spectral", 50, 2, 6, spectral_suite},    {"wilson", 10, 2, 4, wilson_suite},
};

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& s : suites)
            out.emplace_back(s.name);
        return out;
    }();
    return names;
}

Rng trial_rng(const std::string& suite, std::uint64_t seed, std::size_t trial) {
    for (std::size_t id = 0; id < std::size(suites); ++id)
        if (suite == suites[id].name)
            return Rng(seed, ((id + 1) << 32) | trial);
    throw std::invalid_argument("unknown suite '" + suite + "'");
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& opts) {
    for (std::size_t id = 0; id < std::size(suites); ++id) {
        const SuiteSpec& spec = suites[id];
        if (name != spec.name)
            continue;
        const std::size_t max_n = std::max(opts.max_n.value_or(spec.max_n), spec.min_n);
        SuiteReport report;
        report.name = name;
        Context ctx(report, opts, id + 1, opts.trials.value_or(spec.trials), spec.min_n, max_n);
        const auto start = std::chrono::steady_clock::now();
        spec.run(ctx);
        report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return report;
    }
    throw std::invalid_argument("unknown suite '" + name + "'");
}

} // namespace mctree
