"""Acceptance gate: fifteen numbered checks with frozen protocols.

One test per check. Each prints a single summary line with the measured
statistics next to the asserted tolerance, then asserts exactly the
stated thresholds and the runtime budget. All randomness derives from
seed-0 streams whose stream id is the check number (the two spectrum
checks reuse the CLI convention stream_id = depth); the streams were
fixed before the first full run and no seed was reselected afterwards.

Two checks are statistically borderline by construction and are
asserted as stated rather than loosened; the inline notes give the
population-level analysis. A red outcome there is a finding, not a
regression.
"""

import math
import time

import numpy as np
from scipy import stats

from deep_prior_lab import (
    ComposedKernelChain,
    DeepArchitecture,
    DropoutInputKernel,
    FixedPointQuery,
    KernelSpec,
    PointSet,
    RngStream,
    additive_order_term,
    analytic_log_moments,
    cli,
    compose_se,
    deep_derivative_log_sum,
    deep_jacobian,
    deep_kernel_chain,
    dropout_hidden_variance,
    dropout_input_kernel,
    dropout_input_kernel_bruteforce,
    fixed_point_kernel,
    input_connected_deep_kernel,
    make_feature_set,
    mc_log_derivative_moments,
    network_covariance,
    random_feature_network_batch,
    sample_deep_composition,
    sample_dropout_mixture_batch,
    sample_layer_jacobian,
    spectrum_distribution,
)

SEED = 0


def _line(num: int, detail: str, t0: float, limit: float | None = None) -> float:
    elapsed = time.perf_counter() - t0
    budget = "" if limit is None else f" [{elapsed:.1f}s of {limit:.0f}s]"
    print(f"criterion {num:02d}: {detail}{budget}")
    return elapsed


def test_criterion_01_composition_closed_form():
    t0 = time.perf_counter()
    gen = RngStream(SEED, stream_id=1).generator()
    values = np.concatenate((gen.uniform(-1.0, 1.0, 998), [1.0, -1.0]))
    worst = 0.0
    for u in values:
        direct = math.exp(-0.5 * (1.0 - 2.0 * u + 1.0))
        got = compose_se(1.0, float(u), 1.0)
        worst = max(worst, abs(got - direct) / direct)
    dt = _line(1, f"1000 normalized triples, worst rel dev {worst:.2e} (tol 1e-15)",
               t0, 1.0)
    assert worst <= 1e-15
    assert dt < 1.0


def test_criterion_02_degenerate_constant_limit():
    t0 = time.perf_counter()
    base = KernelSpec.squared_exp()
    depths = (0, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 1000)
    worst_gap = 0.0
    for r in np.linspace(0.1, 5.0, 20):
        x, xp = np.array([0.0]), np.array([float(r)])
        ladder = [deep_kernel_chain(ComposedKernelChain(base, d), x, xp)
                  for d in depths]
        for lo, hi in zip(ladder, ladder[1:]):
            assert hi > lo, f"chain value not strictly increasing at r = {r}"
        worst_gap = max(worst_gap, abs(ladder[-1] - 1.0))
    dt = _line(2, f"20 distances, max |k - 1| at depth 1000 is {worst_gap:.2e} "
               "(tol 0.01), ladder strictly increasing", t0, 1.0)
    assert worst_gap < 0.01
    assert dt < 1.0


def _bisect_fixed_point(c: float) -> float:
    # k - log k is strictly decreasing on (0, 1], so the root of
    # k - log k = c brackets between 1e-30 (value ~69) and 1 (value 1).
    lo, hi = 1e-30, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid - math.log(mid) > c:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_criterion_03_fixed_point_kernel():
    t0 = time.perf_counter()
    gen = RngStream(SEED, stream_id=3).generator()
    worst_res = 0.0
    worst_bis = 0.0
    for r in 10.0 * gen.uniform(0.0, 1.0, 100):
        k = fixed_point_kernel(FixedPointQuery(float(r)))
        c = 1.0 + 0.5 * r * r
        worst_res = max(worst_res, abs(k - math.log(k) - c))
        worst_bis = max(worst_bis, abs(k - _bisect_fixed_point(c)))
    worst_depth = 0.0
    for r in (0.5, 1.0, 2.0):
        chain = ComposedKernelChain(KernelSpec.squared_exp(), 2**14,
                                    input_connected=True)
        finite = input_connected_deep_kernel(chain, np.array([0.0]), np.array([r]))
        limit = fixed_point_kernel(FixedPointQuery(r))
        worst_depth = max(worst_depth, abs(finite - limit))
    dt = _line(3, f"residual {worst_res:.2e} (tol 1e-10), bisection gap "
               f"{worst_bis:.2e} (tol 1e-10), depth-16384 gap {worst_depth:.2e} "
               "(tol 1e-3)", t0, 5.0)
    assert worst_res < 1e-10
    assert worst_bis < 1e-10
    assert worst_depth < 1e-3
    assert dt < 5.0


def test_criterion_04_lighter_tails_than_exponential():
    t0 = time.perf_counter()
    rs = np.linspace(2.0, 10.0, 33)
    ks = np.array([fixed_point_kernel(FixedPointQuery(float(r))) for r in rs])
    margin = float(np.min(np.exp(-rs) - ks))
    dt = _line(4, f"fixed point below exp(-r) on [2, 10], min margin {margin:.3e}",
               t0, 1.0)
    assert np.all(ks < np.exp(-rs))
    assert dt < 1.0


def test_criterion_05_derivative_log_moments():
    t0 = time.perf_counter()
    r = mc_log_derivative_moments(1.0, 1.0, 10**6, RngStream(SEED, stream_id=5))
    dt = _line(5, f"mc mean {r.mean_log_mc:.5f} vs {r.mean_log_analytic:.5f} "
               f"({abs(r.mean_log_mc - r.mean_log_analytic) / r.mean_log_mc_se:.2f} SE), "
               f"mc var {r.var_log_mc:.5f} vs {r.var_log_analytic:.5f} "
               f"({abs(r.var_log_mc - r.var_log_analytic) / r.var_log_mc_se:.2f} SE); "
               f"closed forms m = {r.mean_log_closed_form:.6f}, "
               f"v = {r.var_log_closed_form:.6f}, discrepancy to mc "
               f"dm = {r.mean_discrepancy:.5f}, dv = {r.var_discrepancy:.5f}",
               t0, 10.0)
    assert abs(r.mean_log_mc - r.mean_log_analytic) <= 3.0 * r.mean_log_mc_se
    assert abs(r.var_log_mc - r.var_log_analytic) <= 3.0 * r.var_log_mc_se
    # Reference constants: the quoted mean matches the closed form to five
    # decimals; the quoted variance 1.57418 differs from the exact closed
    # form 1.574259 in the fourth decimal (a rounding slip in the source
    # of the quote), so it is checked at 1e-3.
    assert round(r.mean_log_closed_form, 5) == -1.27036
    assert abs(r.var_log_closed_form - 1.57418) < 1e-3
    assert dt < 10.0


def test_criterion_06_log_sum_normality():
    t0 = time.perf_counter()
    L, n = 100, 10**5
    sums = deep_derivative_log_sum(1.0, 1.0, L, n, RngStream(SEED, stream_id=6))
    m, v = analytic_log_moments(1.0, 1.0)
    standardized = (sums - L * m) / math.sqrt(L * v)
    sample_var = float(np.var(sums, ddof=1))
    centered = sums - np.mean(sums)
    var_se = math.sqrt(max(np.mean(centered**4) - sample_var**2, 0.0) / n)
    var_dev = abs(sample_var - L * v) / var_se
    ks = stats.kstest(standardized, "norm")
    critical = 1.6276 / math.sqrt(n)
    dt = _line(6, f"sample var {sample_var:.2f} vs {L * v:.2f} ({var_dev:.2f} SE); "
               f"KS stat {ks.statistic:.5f} vs alpha=0.01 critical {critical:.5f}, "
               f"p = {ks.pvalue:.2e}", t0, 30.0)
    assert var_dev <= 3.0
    assert dt < 30.0
    # The standardized sum keeps skewness -1.53/sqrt(L) = -0.15, whose CDF
    # sup-deviation (~0.010, Edgeworth |g1|/6 * phi(0)) exceeds the
    # critical value above at this n for every seed; measured over 30 side
    # seeds the KS statistic was 0.0101 +- 0.0015 with minimum 0.0072.
    # Normality does hold at larger L (0.0039 at L = 400). The clause is
    # asserted as stated; the variance clause above carries the
    # linear-in-L content and passes.
    assert ks.pvalue > 0.01, (
        f"KS {ks.statistic:.5f} exceeds the alpha=0.01 critical value "
        f"{critical:.5f}; the standardized sum is detectably skewed at "
        f"L = {L}, n = {n}"
    )


def test_criterion_07_layer_jacobian_structure():
    t0 = time.perf_counter()
    rng = RngStream(SEED, stream_id=7)
    n = 10**5
    lengthscales = (1.0, 2.0, 0.5)
    entries = np.empty((n, 9))
    for i in range(n):
        entries[i] = sample_layer_jacobian(3, 1.0, lengthscales,
                                           rng.substream(i)).ravel()
    corr = np.corrcoef(entries, rowvar=False)
    off = corr[~np.eye(9, dtype=bool)]
    max_rho = float(np.max(np.abs(off)))
    rho_bound = 4.0 / math.sqrt(n)
    variances = entries.var(axis=0)
    targets = np.array([1.0 / lengthscales[k % 3] ** 2 for k in range(9)])
    max_var_dev = float(np.max(np.abs(variances / targets - 1.0)))
    # Scalar case: the 1x1 deep product must be distributed like the sum
    # of independent per-layer log derivatives.
    n2, L, w = 10**4, 6, 0.9
    prods = np.array([
        deep_jacobian(L, 1, 1.0, (w,), rng=rng.substream(200_000 + i))[0, 0]
        for i in range(n2)
    ])
    chain = deep_derivative_log_sum(1.0, w, L, n2, rng.substream(500_000))
    two_sample = stats.ks_2samp(np.log(np.abs(prods)), chain)
    dt = _line(7, f"max |rho| {max_rho:.4f} (bound {rho_bound:.4f}), max var dev "
               f"{max_var_dev:.3%} (tol 3%), scalar-product KS p = "
               f"{two_sample.pvalue:.3f} (alpha 0.01)", t0, 30.0)
    assert max_rho < rho_bound
    assert max_var_dev < 0.03
    assert two_sample.pvalue > 0.01
    assert dt < 30.0


def test_criterion_08_spectrum_collapse_with_depth():
    t0 = time.perf_counter()
    med = {}
    for L in (2, 50):
        summary = spectrum_distribution(L, 5, 1.0, (1.0,) * 5, False, 1000,
                                        RngStream(SEED, stream_id=L))
        med[L] = summary.median_ratio(2)
    dt = _line(8, f"median s2/s1 at depth 2 = {med[2]:.4f}, at depth 50 = "
               f"{med[50]:.2e}; ratio {med[50] / med[2]:.2e} (must be < 0.5)",
               t0, 60.0)
    assert med[50] < med[2]
    assert med[50] < 0.5 * med[2]
    assert dt < 60.0


def test_criterion_09_input_connection_preserves_spectrum():
    t0 = time.perf_counter()
    # Lengthscale sqrt(layer input width): every output dimension then has
    # unit total derivative variance (the multivariate analogue of the
    # one-dimensional sigma^2/w^2 = pi/2 normalization). Standard-product
    # singular value RATIOS are exactly scale invariant, so this choice
    # moves only the connected arm; with short lengthscales the identity
    # injections are exponentially outweighed and no architecture keeps
    # the spectrum flat.
    w = math.sqrt(10.0)
    arms = {}
    for connected in (False, True):
        summary = spectrum_distribution(50, 5, 1.0, (w,) * 5, connected, 1000,
                                        RngStream(SEED, stream_id=50))
        arms[connected] = summary.median_ratio(2)
    ratio = arms[True] / arms[False]
    dt = _line(9, f"median s2/s1 connected = {arms[True]:.4f}, standard = "
               f"{arms[False]:.2e}; ratio {ratio:.3e} (threshold 5)", t0, 60.0)
    assert arms[True] >= 5.0 * arms[False]
    assert dt < 60.0


def test_criterion_10_wide_network_spectrum_flatness():
    t0 = time.perf_counter()
    summary = spectrum_distribution(100, 128, 1.0, (1.0,) * 128, False, 100,
                                    RngStream(SEED, stream_id=10))
    med = summary.median_ratio(2)
    dt = _line(10, f"median s2/s1 at D = 128, depth 100: {med:.4f} "
               "(threshold 0.5)", t0, 120.0)
    assert dt < 120.0
    # Knife edge: the population median at exactly these parameters is
    # 0.4951 +- 0.0045 (3000 side-seed draws), i.e. just below the
    # threshold, so this assertion can land either way (~37% pass). The
    # stream above was committed a priori; whichever way it lands is the
    # honest outcome. The qualitative flatness claim is solid: the D = 5
    # median at this depth is ~4e-4, three orders of magnitude lower.
    assert med > 0.5, (
        f"median s2/s1 = {med:.4f} at the committed stream; the population "
        "median sits at 0.495 +- 0.005, below the stated 0.5 threshold"
    )


def test_criterion_11_random_feature_clt():
    t0 = time.perf_counter()
    rng = RngStream(SEED, stream_id=11)
    pts = PointSet(np.array([[-0.7], [0.4], [1.3]]))
    families = ("gaussian", "uniform", "rademacher")
    # Covariance clause: one realized feature set per (family, K), 1e5
    # networks, every entry of the second-moment matrix within 5 SE of
    # the realized-feature covariance.
    n_cov = 10**5
    worst_se = 0.0
    for fi, family in enumerate(families):
        for ki, K in enumerate((10, 100)):
            node = rng.substream(fi * 2 + ki)
            feature = make_feature_set("cosine", K, 1, node.substream(0))
            vals = random_feature_network_batch(n_cov, K, 1.0, feature, pts,
                                                node.substream(1),
                                                weight_family=family)
            target = network_covariance(feature, 1.0, pts)
            for i in range(3):
                for j in range(i, 3):
                    prods = vals[:, i] * vals[:, j]
                    se = float(np.std(prods, ddof=1)) / math.sqrt(n_cov)
                    dev = abs(float(np.mean(prods)) - target[i, j]) / se
                    worst_se = max(worst_se, dev)
    # KS clause, against the infinite-width limit marginal. The statistic
    # is the sum f(x0) + f(x1) at two points three lengthscales apart,
    # pooled over fresh feature realizations (blocks of 2000 networks).
    # At a single point the cosine fourth-moment ratio q = 1.5 makes the
    # net excess kurtosis ((3 + kappa_w) q - 3)/K, which nearly cancels
    # for uniform weights (kappa_w = -1.2); the two-point sum raises q to
    # ~2.25 and all three families separate cleanly from the noise floor
    # at this sample size.
    sum_pts = PointSet(np.array([[0.0], [3.0]]))
    limit_sd = math.sqrt(2.0 + 2.0 * math.exp(-4.5))
    n_ks, block = 2_000_000, 2000
    ks_stats = {}
    for fi, family in enumerate(families):
        for ki, K in enumerate((10, 100)):
            branch = rng.substream(100 + fi * 2 + ki)
            pooled = np.empty(n_ks)
            for b in range(n_ks // block):
                node = branch.substream(b)
                feature = make_feature_set("cosine", K, 1, node.substream(0))
                v = random_feature_network_batch(block, K, 1.0, feature,
                                                 sum_pts, node.substream(1),
                                                 weight_family=family)
                pooled[b * block:(b + 1) * block] = (v[:, 0] + v[:, 1]) / limit_sd
            ks_stats[family, K] = stats.kstest(pooled, "norm").statistic
    detail = ", ".join(
        f"{fam} {ks_stats[fam, 10]:.5f}->{ks_stats[fam, 100]:.5f}"
        for fam in families
    )
    dt = _line(11, f"covariance worst dev {worst_se:.2f} SE (bound 5); "
               f"KS K=10 -> K=100: {detail}", t0, 60.0)
    assert worst_se < 5.0
    for family in families:
        assert ks_stats[family, 100] < ks_stats[family, 10], family
    assert dt < 60.0


def test_criterion_12_hidden_dropout_noop():
    t0 = time.perf_counter()
    assert dropout_hidden_variance(0.5, 1.7, rescale=False) == 0.5 * 1.7
    assert dropout_hidden_variance(0.5, 1.7, rescale=True) == 1.7
    assert dropout_hidden_variance(0.25, 2.0, rescale=False) == 0.5
    rng = RngStream(SEED, stream_id=12)
    K, n, block = 10**4, 2000, 500
    pts = PointSet(np.array([[-0.5], [0.9]]))
    feature = make_feature_set("cosine", K, 1, rng.substream(0))
    arms = {}
    for name, offset, kwargs in (
        ("masked", 10, {"keep_prob": 0.5, "rescale": True}),
        ("plain", 100, {}),
    ):
        chunks = [
            random_feature_network_batch(block, K, 1.0, feature, pts,
                                         rng.substream(offset + c), **kwargs)
            for c in range(n // block)
        ]
        arms[name] = np.vstack(chunks)
    worst = 0.0
    for i in range(2):
        for j in range(i, 2):
            pa = arms["masked"][:, i] * arms["masked"][:, j]
            pb = arms["plain"][:, i] * arms["plain"][:, j]
            se = math.sqrt(np.var(pa, ddof=1) / n + np.var(pb, ddof=1) / n)
            worst = max(worst, abs(float(np.mean(pa) - np.mean(pb))) / se)
    dt = _line(12, f"masked-rescaled vs plain covariance, worst dev "
               f"{worst:.2f} SE (bound 5); hidden variances exact", t0, 30.0)
    assert worst < 5.0
    assert dt < 30.0


def test_criterion_13_input_dropout_kernel():
    t0 = time.perf_counter()
    rng = RngStream(SEED, stream_id=13)
    worst_prod = 0.0
    for i in range(1000):
        D = i % 15 + 1
        gen = rng.substream(i).generator()
        k = gen.uniform(0.0, 1.0, D)
        if i % 7 == 0:
            k[0] = 1.0
        if i % 11 == 0:
            k[-1] = 0.0
        p = float(gen.uniform(0.05, 0.95))
        brute = dropout_input_kernel_bruteforce(k, p)
        worst_prod = max(worst_prod,
                         abs(dropout_input_kernel(k, p) - brute) / abs(brute))
    # The order terms come from the alternating Newton-Girard recurrence,
    # which cancels when e_d is small next to p_1 e_{d-1}; at D = 15 that
    # costs a few digits (worst observed ~2e-11 relative), so the identity
    # is asserted at 1e-9 rather than at the product-clause tolerance.
    # The terms themselves are checked against exact subset enumeration
    # in the dropout unit tests.
    worst_dec = 0.0
    for i in range(100):
        D = i % 15 + 1
        gen = rng.substream(2000 + i).generator()
        k = gen.uniform(0.0, 1.0, D)
        p = float(gen.uniform(0.05, 0.95))
        total = sum(p**d * (1.0 - p) ** (D - d) * additive_order_term(k, d)
                    for d in range(D + 1))
        direct = dropout_input_kernel(k, p)
        worst_dec = max(worst_dec, abs(total - direct) / abs(direct))
    kernel = DropoutInputKernel((KernelSpec.squared_exp(),) * 2, 0.5)
    pts = PointSet(np.array([[0.0, 0.0], [2.0, 2.0]]))
    off = dropout_input_kernel(
        kernel.coordinate_values(pts.points[0], pts.points[1]), kernel.p)
    target = np.array([[1.0, off], [off, 1.0]])
    n_cov = 20_000
    draws = sample_dropout_mixture_batch(kernel, pts, n_cov,
                                         rng.substream(5000))
    worst_cov = 0.0
    for i in range(2):
        for j in range(i, 2):
            prods = draws[:, i] * draws[:, j]
            se = float(np.std(prods, ddof=1)) / math.sqrt(n_cov)
            worst_cov = max(worst_cov,
                            abs(float(np.mean(prods)) - target[i, j]) / se)
    # Every mixture component has unit variance at a single point, so the
    # one-point marginal is exactly standard normal; the non-Gaussianity
    # lives in increments, whose conditional variance 2 - 2 k_mask(x, x')
    # varies with the mask.
    n_kurt = 10**5
    big = sample_dropout_mixture_batch(kernel, pts, n_kurt,
                                       rng.substream(6000))
    inc = big[:, 0] - big[:, 1]
    excess = float(np.mean(inc**4) / np.mean(inc**2) ** 2 - 3.0)
    single = float(np.mean(big[:, 0] ** 4) / np.mean(big[:, 0] ** 2) ** 2 - 3.0)
    kurt_se = math.sqrt(24.0 / n_kurt)
    dt = _line(13, f"product vs enumeration worst rel {worst_prod:.2e} "
               f"(tol 1e-12), order-sum worst rel {worst_dec:.2e}; mixture "
               f"covariance worst dev {worst_cov:.2f} SE (bound 5); increment "
               f"excess kurtosis {excess:.3f} ({excess / kurt_se:.0f} SE, need "
               f"> 3), single-point {single:+.3f} for contrast", t0, 60.0)
    assert worst_prod <= 1e-12
    assert worst_dec <= 1e-9
    assert worst_cov < 5.0
    assert excess > 3.0 * kurt_se
    assert dt < 60.0


def test_criterion_14_depth_pathology_1d():
    t0 = time.perf_counter()
    # sigma^2/w^2 = pi/2 keeps the expected derivative magnitude of every
    # layer at 1, so the composed |df/dx| should hold its mean across
    # depths while the log-derivative variance grows with each layer.
    w = math.sqrt(2.0 / math.pi)
    grid = np.linspace(-3.0, 3.0, 161)
    pts = PointSet(grid.reshape(-1, 1))
    dx = grid[1] - grid[0]
    rng = RngStream(SEED, stream_id=14)
    depths = (1, 5, 10)
    means = {}
    var_logs = {}
    for L in depths:
        arch = DeepArchitecture(depth=L, layer_width=1,
                                layer_kernel=KernelSpec.squared_exp(1.0, w))
        slopes = []
        for s in range(100):
            trace = sample_deep_composition(arch, pts,
                                            rng.substream(L * 1000 + s))
            slopes.append(np.abs(np.diff(trace.final()[:, 0]) / dx))
        pooled = np.concatenate(slopes)
        means[L] = float(np.mean(pooled))
        var_logs[L] = float(np.var(np.log(pooled)))
    spread = max(means.values()) / min(means.values())
    dt = _line(14, f"mean |df/dx| by depth { {L: round(means[L], 3) for L in depths} } "
               f"(spread {spread:.2f}, limit 2), var log "
               f"{ {L: round(var_logs[L], 2) for L in depths} } strictly increasing",
               t0, 60.0)
    assert spread <= 2.0
    assert var_logs[1] < var_logs[5] < var_logs[10]
    assert dt < 60.0


def test_criterion_15_cli_reproducibility(tmp_path):
    t0 = time.perf_counter()
    jobs = {
        "sample-1d": ["--depth", "3", "--grid-n", "40"],
        "warp-2d": ["--depth", "2", "--grid-n", "50"],
        "feature-map": ["--depth", "2", "--grid-n", "12"],
        "spectrum": ["--depth", "2,6", "--dims", "3", "--n-draws", "100"],
        "derivative-stats": ["--n-draws", "10000"],
        "kernel-compose": ["--depth", "1,3,inf", "--grid-n", "25"],
        "dropout-kernel": ["--dims", "2", "--grid-n", "9"],
        "feature-clt": ["--dims", "10,40", "--n-draws", "150", "--grid-n", "3"],
    }
    assert set(jobs) == set(cli.COMMANDS)
    checked = 0
    for command, extra in jobs.items():
        first = tmp_path / command / "a"
        second = tmp_path / command / "b"
        replay = tmp_path / command / "replay"
        args = [command, "--seed", str(SEED)] + extra
        assert cli.run(args + ["--output-dir", str(first)]) == 0, command
        assert cli.run(args + ["--output-dir", str(second)]) == 0, command
        assert cli.run(["--config", str(first / "manifest.txt"),
                        "--output-dir", str(replay)]) == 0, command
        csvs = sorted(p.name for p in first.iterdir() if p.suffix == ".csv")
        assert csvs, command
        for name in csvs:
            reference = (first / name).read_bytes()
            assert (second / name).read_bytes() == reference, (command, name)
            assert (replay / name).read_bytes() == reference, (command, name)
            checked += 1
        strip = lambda p: [ln for ln in p.read_text().splitlines()
                           if not ln.startswith("output_dir=")]
        assert strip(first / "manifest.txt") == strip(second / "manifest.txt")
        assert strip(first / "manifest.txt") == strip(replay / "manifest.txt")
    _line(15, f"{len(jobs)} commands, {checked} CSV byte comparisons across "
          "rerun and manifest replay, all identical", t0)
