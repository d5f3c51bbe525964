// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/haar.hpp"

#include "metroscope/interferometer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace metroscope {

CMatrix haar_unitary(Index dim, Rng& rng)
{
    if (dim < 1) {
        throw ArgumentError("Haar unitary needs D >= 1");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix z(dim, dim);
    for (Index j = 0; j < dim; ++j) {
        for (Index i = 0; i < dim; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            z(i, j) = Complex(re, im);
        }
    }
    const Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix& r = qr.matrixQR();
    for (Index j = 0; j < dim; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) {
            q.col(j) *= r(j, j) / mag;
        }
    }
    return q;
}

CVector haar_state(Index dim, Rng& rng)
{
    if (dim < 1) {
        throw ArgumentError("Haar state needs D >= 1");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(dim);
    for (Index i = 0; i < dim; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return v.normalized();
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

std::string to_string(EnsembleKind kind)
{
    switch (kind) {
    case EnsembleKind::haar_full_pure:
        return "haar_full_pure";
    case EnsembleKind::haar_sym_isospectral:
        return "haar_sym_isospectral";
    case EnsembleKind::haar_sym_depolarized:
        return "haar_sym_depolarized";
    case EnsembleKind::circuit:
        return "circuit";
    }
    return "?";
}

EnsembleSpec EnsembleSpec::full_pure(int particles, int modes)
{
    EnsembleSpec s;
    s.kind = EnsembleKind::haar_full_pure;
    s.particles = particles;
    s.modes = modes;
    return s;
}

EnsembleSpec EnsembleSpec::sym_pure(int particles, int modes)
{
    EnsembleSpec s;
    s.kind = EnsembleKind::haar_sym_isospectral;
    s.particles = particles;
    s.modes = modes;
    return s;
}

EnsembleSpec EnsembleSpec::sym_isospectral(int particles, int modes, Spectrum spectrum)
{
    EnsembleSpec s = sym_pure(particles, modes);
    s.spectrum = std::move(spectrum);
    return s;
}

EnsembleSpec EnsembleSpec::sym_depolarized(int particles, int modes, double p)
{
    EnsembleSpec s;
    s.kind = EnsembleKind::haar_sym_depolarized;
    s.particles = particles;
    s.modes = modes;
    s.depolarization = p;
    return s;
}

EnsembleSpec EnsembleSpec::circuit(int particles, int depth, StartState start)
{
    EnsembleSpec s;
    s.kind = EnsembleKind::circuit;
    s.particles = particles;
    s.modes = 2;
    s.depth = depth;
    s.start = start;
    return s;
}

Index EnsembleSpec::dim() const
{
    if (kind == EnsembleKind::haar_full_pure) {
        return full_dim(particles, modes);
    }
    const std::uint64_t d = sym_dim(particles, modes);
    if (d > (std::uint64_t{1} << 22)) {
        throw CapacityError("symmetric subspace too large for dense sampling");
    }
    return static_cast<Index>(d);
}

bool EnsembleSpec::pure() const
{
    switch (kind) {
    case EnsembleKind::haar_full_pure:
    case EnsembleKind::circuit:
        return true;
    case EnsembleKind::haar_sym_isospectral:
        return !spectrum || (*spectrum)[0] == 1.0;
    case EnsembleKind::haar_sym_depolarized:
        return depolarization == 0.0;
    }
    return false;
}

void EnsembleSpec::validate() const
{
    if (particles < 1) {
        throw ArgumentError("ensemble needs N >= 1");
    }
    if (modes < 2) {
        throw ArgumentError("ensemble needs d >= 2");
    }
    const Index d = dim();
    switch (kind) {
    case EnsembleKind::haar_full_pure:
        break;
    case EnsembleKind::haar_sym_isospectral:
        if (spectrum && spectrum->size() != d) {
            throw ArgumentError("reference spectrum length differs from |S_N|");
        }
        break;
    case EnsembleKind::haar_sym_depolarized:
        if (!(depolarization >= 0.0 && depolarization <= 1.0)) {
            throw ArgumentError("depolarization weight must lie in [0, 1]");
        }
        break;
    case EnsembleKind::circuit:
        if (modes != 2) {
            throw ArgumentError("circuit ensembles are two-mode");
        }
        if (depth < 0) {
            throw ArgumentError("circuit depth must be nonnegative");
        }
        break;
    }
}

AnyState sample_state(const EnsembleSpec& spec, Rng& rng)
{
    switch (spec.kind) {
    case EnsembleKind::haar_full_pure:
        return FullState::pure(spec.particles, spec.modes, haar_state(spec.dim(), rng));
    case EnsembleKind::haar_sym_isospectral: {
        const DickeBasis basis(spec.particles, spec.modes);
        if (spec.pure()) {
            return SymmetricState::pure(basis, haar_state(basis.dim(), rng));
        }
        const RVector& p = spec.spectrum->values();
        Index rank = 0;
        while (rank < p.size() && p(rank) > 0.0) {
            ++rank;
        }
        const CMatrix u = haar_unitary(basis.dim(), rng).leftCols(rank);
        CMatrix rho = u * p.head(rank).cast<Complex>().asDiagonal() * u.adjoint();
        rho = 0.5 * (rho + rho.adjoint());
        rho /= rho.trace().real();
        return SymmetricState::density(basis, std::move(rho));
    }
    case EnsembleKind::haar_sym_depolarized: {
        const DickeBasis basis(spec.particles, spec.modes);
        const CVector psi = haar_state(basis.dim(), rng);
        if (spec.depolarization == 0.0) {
            return SymmetricState::pure(basis, psi);
        }
        const double p = spec.depolarization;
        CMatrix rho = (1.0 - p) * (psi * psi.adjoint());
        rho.diagonal().array() += p / static_cast<double>(basis.dim());
        rho = 0.5 * (rho + rho.adjoint());
        return SymmetricState::density(basis, std::move(rho));
    }
    case EnsembleKind::circuit: {
        const Circuit c = sample_circuit(spec.particles, spec.depth, rng);
        return apply_circuit(start_state(spec.start, spec.particles), c);
    }
    }
    throw ArgumentError("unknown ensemble kind");
}

// ---------------------------------------------------------------------------
// Streams
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    return splitmix(splitmix(master) ^ splitmix(index ^ 0xd1b54a32d192ed03ULL));
}

Rng derive_stream(std::uint64_t master, std::uint64_t index)
{
    const std::uint64_t a = derive_seed(master, index);
    const std::uint64_t b = splitmix(a ^ 0x8cb92ba72f3d8dd7ULL);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

std::vector<McResult> mc_estimate_multi(const MultiSampleFunction& f, Index width, Index n,
                                        std::uint64_t master_seed, int workers)
{
    if (n < 2) {
        throw ArgumentError("Monte Carlo needs at least 2 samples");
    }
    if (width < 1) {
        throw ArgumentError("Monte Carlo needs at least one statistic");
    }
    const auto sn = static_cast<std::size_t>(n);
    const auto sw = static_cast<std::size_t>(width);
    std::vector<double> values(sn * sw, 0.0);
    std::vector<std::string> errors(sn);
    std::vector<char> failed(sn, 0);

    std::atomic<Index> next{0};
    auto run = [&] {
        for (Index i = next++; i < n; i = next++) {
            const auto si = static_cast<std::size_t>(i);
            Rng rng = derive_stream(master_seed, static_cast<std::uint64_t>(i));
            try {
                const std::vector<double> v = f(i, rng);
                if (v.size() != sw) {
                    throw Error("sample function returned the wrong number of statistics");
                }
                for (double x : v) {
                    if (!std::isfinite(x)) {
                        throw Error("sample function returned a non-finite value");
                    }
                }
                std::copy(v.begin(), v.end(), values.begin() + static_cast<std::ptrdiff_t>(si * sw));
            } catch (const std::exception& e) {
                failed[si] = 1;
                errors[si] = e.what();
            }
        }
    };

    unsigned threads = workers > 0 ? static_cast<unsigned>(workers) : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<Index>(threads, n));
    if (threads <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(run);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    std::vector<McResult> out(sw);
    Index skipped = 0;
    std::vector<std::pair<Index, std::string>> failures;
    for (std::size_t i = 0; i < sn; ++i) {
        if (failed[i]) {
            ++skipped;
            failures.emplace_back(static_cast<Index>(i), errors[i]);
        }
    }
    if (static_cast<double>(skipped) > kMaxSkipFraction * static_cast<double>(n)) {
        throw Error("Monte Carlo aborted: " + std::to_string(skipped) + " of " + std::to_string(n) +
                    " samples failed (first: " + failures.front().second + ")");
    }
    const Index good = n - skipped;
    if (good < 2) {
        throw Error("Monte Carlo left fewer than 2 valid samples");
    }
    for (std::size_t k = 0; k < sw; ++k) {
        McResult& r = out[k];
        r.n_samples = good;
        r.skipped = skipped;
        r.master_seed = master_seed;
        r.failures = failures;
        r.values.reserve(static_cast<std::size_t>(good));
        for (std::size_t i = 0; i < sn; ++i) {
            if (!failed[i]) {
                r.values.push_back(values[i * sw + k]);
            }
        }
        double sum = 0.0;
        for (double x : r.values) {
            sum += x;
        }
        r.mean = sum / static_cast<double>(good);
        double ss = 0.0;
        for (double x : r.values) {
            ss += (x - r.mean) * (x - r.mean);
        }
        r.sample_std = std::sqrt(ss / static_cast<double>(good - 1));
        r.std_error = r.sample_std / std::sqrt(static_cast<double>(good));
    }
    return out;
}

McResult mc_estimate(const SampleFunction& f, Index n, std::uint64_t master_seed, int workers)
{
    return mc_estimate_multi([&f](Index i, Rng& rng) { return std::vector<double>{f(i, rng)}; }, 1, n,
                             master_seed, workers)
        .front();
}

McResult mc_estimate(const StateFunctional& functional, const EnsembleSpec& spec, Index n,
                     std::uint64_t master_seed, int workers)
{
    spec.validate();
    if (spec.kind == EnsembleKind::circuit) {
        GateSet::shared(spec.particles);
    }
    return mc_estimate([&](Index, Rng& rng) { return functional(sample_state(spec, rng)); }, n, master_seed,
                       workers);
}

// ---------------------------------------------------------------------------
// Concentration
// ---------------------------------------------------------------------------

ConcentrationTarget ConcentrationTarget::qfi(const CMatrix& h)
{
    ConcentrationTarget t;
    t.kind = Kind::qfi;
    t.h = h;
    return t;
}

ConcentrationTarget ConcentrationTarget::mz_fi(double phi)
{
    ConcentrationTarget t;
    t.kind = Kind::mz_fi;
    t.h = 0.5 * pauli(Axis::z);
    t.phi = phi;
    return t;
}

namespace {

StateFunctional make_evaluator(const EnsembleSpec& spec, const ConcentrationTarget& target)
{
    if (target.kind == ConcentrationTarget::Kind::mz_fi) {
        const auto mz = MachZehnder::shared(spec.particles);
        const double phi = target.phi;
        return [mz, phi](const AnyState& s) { return mz->fisher(std::get<SymmetricState>(s), phi); };
    }
    const LocalHamiltonian h(target.h);
    const auto hn = std::make_shared<const CollectiveHamiltonian>(
        spec.kind == EnsembleKind::haar_full_pure ? collective_full(h, spec.particles)
                                                  : collective_sym(h, spec.particles));
    return [hn](const AnyState& s) { return metroscope::qfi(s, *hn); };
}

}  // namespace

double evaluate_target(const ConcentrationTarget& target, const AnyState& state)
{
    if (target.kind == ConcentrationTarget::Kind::mz_fi) {
        return mz_fi(std::get<SymmetricState>(state), target.phi);
    }
    const LocalHamiltonian h(target.h);
    return std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SymmetricState>) {
                return qfi(s, collective_sym(h, s.particles()));
            } else {
                return qfi(s, collective_full(h, s.particles()));
            }
        },
        state);
}

double concentration_bound(const EnsembleSpec& spec, const ConcentrationTarget& target, double eps)
{
    spec.validate();
    if (spec.kind == EnsembleKind::circuit) {
        throw ArgumentError("no Haar concentration bound applies to circuit ensembles");
    }
    if (!(eps > 0.0)) {
        throw ArgumentError("eps must be positive");
    }
    const double n = spec.particles;
    const double d = spec.modes;
    const double e2 = eps * eps;

    if (target.kind == ConcentrationTarget::Kind::mz_fi) {
        if (spec.kind != EnsembleKind::haar_sym_isospectral || !spec.pure() || spec.modes != 2) {
            throw ArgumentError("the Mach-Zehnder FI bound covers pure two-mode symmetric ensembles only");
        }
        return 2.0 * std::exp(-e2 * (n + 1.0) / (144.0 * std::pow(n, 4)));
    }

    const LocalHamiltonian h(target.h);
    if (h.modes() != spec.modes) {
        throw ArgumentError("single-particle Hamiltonian dimension differs from d");
    }
    const double norm4 = std::pow(h.operator_norm(), 4);
    const double n4 = std::pow(n, 4);
    if (norm4 == 0.0) {
        return 0.0;
    }
    switch (spec.kind) {
    case EnsembleKind::haar_full_pure:
        return 2.0 * std::exp(-e2 * static_cast<double>(spec.dim()) / (4096.0 * norm4 * n4));
    case EnsembleKind::haar_sym_isospectral: {
        const Index dim = spec.dim();
        const Spectrum p = spec.spectrum ? *spec.spectrum : Spectrum::pure(dim);
        const double f = dim > 1 ? lambda_of_spectrum(p, dim).fidelity : 1.0;
        const double bures = std::sqrt(std::max(0.0, 2.0 * (1.0 - f)));
        const double c = std::min(1.0, 8.0 * bures);
        if (c == 0.0) {
            return 0.0;
        }
        return 2.0 * std::exp(-e2 * static_cast<double>(dim) / (4096.0 * c * norm4 * n4));
    }
    case EnsembleKind::haar_sym_depolarized: {
        const Index dim = spec.dim();
        const double s = static_cast<double>(dim);
        const double mean = analytic_avg_qfi(Space::symmetric, spec.particles, spec.modes,
                                             Spectrum::depolarized(dim, spec.depolarization), h.trace_square());
        if (mean <= 0.0) {
            return 0.0;
        }
        const double rel = eps / mean;
        const double t2 = h.trace_square() * h.trace_square();
        const double denom = d * (d + 1.0) * n * (1.0 + s);
        return 2.0 * std::exp(-rel * rel * t2 * (n + d) * (n + d) * s * s / (64.0 * norm4 * denom * denom) * s);
    }
    case EnsembleKind::circuit:
        break;
    }
    throw ArgumentError("unknown ensemble kind");
}

ConcentrationReport concentration_report(const EnsembleSpec& spec, const ConcentrationTarget& target, Index n,
                                         const std::vector<double>& eps_grid, std::uint64_t master_seed,
                                         int workers)
{
    spec.validate();
    if (spec.kind == EnsembleKind::circuit) {
        throw ArgumentError("concentration_report does not cover circuit ensembles");
    }
    if (eps_grid.empty() || !(eps_grid.front() > 0.0) || !std::is_sorted(eps_grid.begin(), eps_grid.end())) {
        throw ArgumentError("eps grid must be nonempty, positive and ascending");
    }
    const StateFunctional f = make_evaluator(spec, target);
    ConcentrationReport report{mc_estimate(f, spec, n, master_seed, workers), {}};
    const std::vector<double>& v = report.samples.values;
    const double m = static_cast<double>(v.size());
    for (double eps : eps_grid) {
        const auto hits = std::count_if(v.begin(), v.end(),
                                        [&](double x) { return std::abs(x - report.samples.mean) >= eps; });
        const double t = static_cast<double>(hits) / m;
        const double bound = concentration_bound(spec, target, eps);
        report.rows.push_back({eps, t, std::sqrt(t * (1.0 - t) / m), bound, bound >= 1.0});
    }
    return report;
}

}  // namespace metroscope
