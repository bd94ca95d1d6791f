"""Global side: archimedean kernels, Hecke-like coefficient sources, the
ramified progression data, Fourier-expansion evaluation, sup-norm scans over
the generating domain, and the classical congruence-group translation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bessel import bessel_K_imag
from .characters import MinimalVectorSpec, chi_value
from .errors import ConfigError, NotInSupport
from .matgroups import Mat2Local, a_mat, decompose_B1T, torus_extract
from .minimal import support_profile, whittaker_closed
from .residues import PSI_SIGN, LocalElement, UnitRoot

ZETA2 = math.pi**2 / 6


# -- archimedean parameters ---------------------------------------------------

@dataclass(frozen=True)
class ArchParams:
    """Archimedean data: either a holomorphic form of even weight k, or a
    Maass form with spectral parameter t and parity m."""

    case: str                   # "holomorphic" | "maass"
    k: int | None = None
    t: float | None = None
    parity: int = 0

    def __post_init__(self):
        if self.case == "holomorphic":
            if self.k is None or self.k < 2 or self.k % 2 != 0:
                raise ConfigError("holomorphic case needs even weight k >= 2")
        elif self.case == "maass":
            if self.t is None:
                raise ConfigError("maass case needs spectral parameter t")
            if self.parity not in (0, 1):
                raise ConfigError("parity must be 0 or 1")
        else:
            raise ConfigError(f"unknown archimedean case {self.case!r}")

    @property
    def T(self) -> float:
        return float(self.k) if self.case == "holomorphic" else 1.0 + abs(self.t)

    @property
    def h_value(self) -> float:
        """The expected sup-norm size contribution: k^{1/4} or T^{1/6}."""
        if self.case == "holomorphic":
            return self.k**0.25
        return self.T ** (1.0 / 6.0)

    @property
    def delta_default(self) -> float:
        return 0.0 if self.case == "holomorphic" else 7.0 / 64.0


def log_kappa(y: float, arch: ArchParams) -> float:
    """log of the archimedean Whittaker kernel at y > 0 (holomorphic case);
    for the Maass case, log |kappa|."""
    if y <= 0:
        raise ValueError("y must be positive")
    if arch.case == "holomorphic":
        return 0.5 * arch.k * math.log(y) - 2.0 * math.pi * y
    v = 0.5 * math.log(y)
    b = bessel_K_imag(arch.t, 2.0 * math.pi * y)
    if b == 0.0:
        return -math.inf
    return v + math.log(abs(b))


def kappa(y: float, arch: ArchParams, sign: int = 1) -> float:
    """The kernel itself: y^{k/2} e^{-2 pi y} (holomorphic, positive y only) or
    sqrt|y| K_{it}(2 pi |y|) with the parity sign for negative arguments."""
    if arch.case == "holomorphic":
        if sign < 0:
            return 0.0
        return math.exp(log_kappa(y, arch))
    base = math.sqrt(y) * bessel_K_imag(arch.t, 2.0 * math.pi * y)
    return base * ((-1) ** arch.parity if sign < 0 else 1)


def c_infty(arch: ArchParams) -> float:
    """L2 normalization of the kernel: (integral of kappa^2 dy/y)^{1/2}.

    Holomorphic: exact log-space formula (4 pi)^{-k/2} Gamma(k)^{1/2}.
    Maass: numeric integral (doubled for the two-sided expansion), with the
    one-sided sanity bound c_inf >= c0 e^{-pi t / 2}.
    """
    if arch.case == "holomorphic":
        return math.exp(0.5 * math.lgamma(arch.k) - 0.5 * arch.k * math.log(4 * math.pi))
    from scipy.integrate import quad
    t = arch.t
    val, err = quad(lambda y: bessel_K_imag(t, 2 * math.pi * y) ** 2,
                    0.0, (_bessel_support_bound(t)), limit=200)
    c = math.sqrt(2.0 * val)
    c0 = 0.05
    if not c >= c0 * math.exp(-math.pi * abs(t) / 2):
        raise ConfigError("archimedean normalization fell below the sanity floor")
    return c


def _bessel_support_bound(t: float) -> float:
    # K_{it}(2 pi y) is negligible once 2 pi y > ~50 + |t|
    return (50.0 + abs(t)) / (2 * math.pi)


def log_c_infty(arch: ArchParams) -> float:
    if arch.case == "holomorphic":
        return 0.5 * math.lgamma(arch.k) - 0.5 * arch.k * math.log(4 * math.pi)
    return math.log(c_infty(arch))


def kernel_peak_ratio(arch: ArchParams) -> float:
    """sup_y kappa(y) / c_infty, the computational shadow of h(pi_inf)."""
    if arch.case == "holomorphic":
        ypk = arch.k / (4 * math.pi)
        return math.exp(log_kappa(ypk, arch) - log_c_infty(arch))
    ys = np.exp(np.linspace(math.log(1e-3), math.log(_bessel_support_bound(arch.t) + 1), 400))
    best = max(abs(kappa(float(y), arch)) for y in ys)
    return best / c_infty(arch)


# -- Hecke-like coefficient sources ------------------------------------------

def _divisor_count(m: int) -> int:
    c, d = 0, 1
    while d * d <= m:
        if m % d == 0:
            c += 2 if d * d != m else 1
        d += 1
    return c


def _factorize(m: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1
    if m > 1:
        out.append((m, 1))
    return out


@dataclass
class CoefficientSource:
    """Multiplicative coefficients lambda(m), Ramanujan-bounded by d(m) m^delta."""

    kind: str
    delta: float
    prime_values: dict = field(default_factory=dict)   # p -> lambda(p)
    explicit: dict = field(default_factory=dict)       # m -> lambda(m) (file kind)

    @classmethod
    def all_ones(cls, delta: float = 0.0) -> "CoefficientSource":
        return cls("all-ones", delta)

    @classmethod
    def sato_tate(cls, seed: int, delta: float = 0.0) -> "CoefficientSource":
        return cls(f"sato-tate({seed})", delta, prime_values={"seed": seed})

    @classmethod
    def from_file(cls, path: str) -> "CoefficientSource":
        """Plain records 'm <tab> lambda', header line '# delta <value>'."""
        delta = 0.0
        explicit = {}
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    parts = line[1:].split()
                    if parts and parts[0] == "delta":
                        delta = float(parts[1])
                    continue
                ms, ls = line.split("\t")
                explicit[int(ms)] = float(ls)
        src = cls("file", delta, explicit=explicit)
        for m, lam in explicit.items():
            if abs(lam) > _divisor_count(m) * m**delta * (1 + 1e-12):
                raise ConfigError(f"coefficient at m={m} violates the Ramanujan bound")
        return src

    def _lambda_p(self, p: int) -> float:
        if self.kind == "all-ones":
            return 1.0
        if p not in self.prime_values:
            # theta ~ (2/pi) sin^2 measure via inverse-CDF bisection on a
            # per-prime deterministic stream
            rng = np.random.default_rng(self.prime_values["seed"] * 1_000_003 + p)
            u = rng.uniform()
            lo, hi = 0.0, math.pi
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                # CDF of the (2/pi) sin^2(theta) density on [0, pi]
                cdf = (mid - 0.5 * math.sin(2 * mid)) / math.pi
                if cdf < u:
                    lo = mid
                else:
                    hi = mid
            self.prime_values[p] = 2.0 * math.cos(0.5 * (lo + hi))
        return self.prime_values[p]

    def _lambda_ppow(self, p: int, e: int) -> float:
        lam = self._lambda_p(p)
        if self.kind == "all-ones":
            return 1.0
        a, b = 1.0, lam            # lambda(p^0), lambda(p^1)
        for _ in range(e - 1):
            a, b = b, lam * b - a  # Hecke recursion at unramified p
        return b if e >= 1 else a

    def value(self, m: int) -> float:
        m = abs(m)
        if m == 0:
            raise ValueError("lambda(0) undefined")
        if self.kind == "file":
            if m not in self.explicit:
                raise ConfigError(f"coefficient file does not cover m={m}")
            return self.explicit[m]
        if self.kind == "all-ones":
            return 1.0
        out = 1.0
        for p, e in _factorize(m):
            out *= self._lambda_ppow(p, e)
        return out

    def values_upto(self, limit: int) -> np.ndarray:
        """lambda(1..limit) by a multiplicative sieve; index 0 unused."""
        if self.kind == "all-ones":
            return np.ones(limit + 1)
        out = np.ones(limit + 1)
        if self.kind == "file":
            for m in range(1, limit + 1):
                out[m] = self.value(m)
            return out
        smallest = np.zeros(limit + 1, dtype=np.int64)
        for p in range(2, limit + 1):
            if smallest[p] == 0:
                smallest[p::p] = np.where(smallest[p::p] == 0, p, smallest[p::p])
        for m in range(2, limit + 1):
            p = int(smallest[m])
            e, r = 0, m
            while r % p == 0:
                r //= p
                e += 1
            out[m] = self._lambda_ppow(p, e) * out[r]
        return out

    def check_ramanujan(self, limit: int = 200) -> bool:
        vals = self.values_upto(limit)
        return all(abs(vals[m]) <= _divisor_count(m) * m**self.delta + 1e-9
                   for m in range(1, limit + 1))


# -- ramified data and the progression-supported expansion -------------------

@dataclass
class LocalRamifiedFactor:
    mv: MinimalVectorSpec
    coset: Mat2Local            # k_p in the maximal compact
    b: int                      # support residue of m mod p^n (after global adjust)
    magnitude: float
    theta_phase: UnitRoot       # theta(t_p) from the coset decomposition
    x_residue: int              # upper-triangular part of k_p mod p^{2n}
    z_residue: int              # leading unit of k_p mod p^{2n}
    cofactor_sq_inv: int        # ((N/p^n)^2)^{-1} mod p^{2n}


@dataclass
class RamifiedData:
    """Everything the global expansion needs from the finite places: the
    modulus N, the progression residue b mod N, amplitude sqrt(phi(N)), and
    per-prime phase data."""

    N: int
    b: int
    amplitude: float
    locals: list[LocalRamifiedFactor]

    @classmethod
    def build(cls, mvs: list[MinimalVectorSpec], cosets: list[Mat2Local] | None = None) -> "RamifiedData":
        primes = [mv.p for mv in mvs]
        if len(set(primes)) != len(primes):
            raise ConfigError("one minimal vector per prime")
        if cosets is None:
            cosets = [Mat2Local.identity(mv.p, mv.torus.precision + 2) for mv in mvs]
        N = 1
        for mv in mvs:
            N *= mv.p**mv.n
        factors = []
        residues = []
        moduli = []
        amp = 1.0
        for mv, k in zip(mvs, cosets):
            p, n = mv.p, mv.n
            pn, pm = p**n, p ** (2 * n)
            z, x, t = decompose_B1T(k, mv.torus, side="left")
            zq = torus_extract(t, mv.torus)
            theta_ph = mv.theta.value((zq.a.residue(2 * n), zq.b.residue(2 * n)))
            b_local = support_profile(mv, k)
            cof = N // pn
            b_adj = b_local * pow(cof % pn, 2, pn) % pn
            factors.append(LocalRamifiedFactor(
                mv, k, b_adj, math.sqrt((p - 1) * p ** (n - 1)), theta_ph,
                x.residue(2 * n), z.residue(2 * n), pow(cof % pm, -2, pm)))
            residues.append(b_adj)
            moduli.append(pn)
            amp *= math.sqrt((p - 1) * p ** (n - 1))
        b = _crt(residues, moduli)
        return cls(N, b, amp, factors)

    @classmethod
    def unramified(cls) -> "RamifiedData":
        return cls(1, 0, 1.0, [])


def _crt(residues, moduli):
    x, mod = 0, 1
    for r, m in zip(residues, moduli):
        x += mod * ((r - x) * pow(mod, -1, m) % m)
        mod *= m
    return x % mod


def lambda_prime(m: int, ram: RamifiedData) -> complex:
    """Exact product of the local Whittaker values at a(m/N^2) k_p.

    Supported exactly on m == b (mod N) with magnitude sqrt(phi(N)).
    """
    if ram.N == 1:
        return 1.0 + 0.0j
    out = 1.0 + 0.0j
    for f in ram.locals:
        mv = f.mv
        p, n = mv.p, mv.n
        M = mv.torus.precision + 2 * n + 2
        y = LocalElement.from_rational(p, Fraction(m, ram.N**2), M)
        if y.is_zero:
            return 0.0
        w = whittaker_closed(mv, a_mat(y) * f.coset)
        if not w.in_support:
            return 0.0
        out *= w.to_complex()
    return out


def lambda_prime_fast(ms: np.ndarray, ram: RamifiedData) -> np.ndarray:
    """Vectorized lambda', cross-checked against lambda_prime in the tests:
    amplitude on the progression, with per-prime unit-root phases."""
    if ram.N == 1:
        return np.ones(len(ms), dtype=complex)
    mask = (ms % ram.N) == ram.b
    out = np.zeros(len(ms), dtype=complex)
    phases = np.zeros(len(ms))
    for f in ram.locals:
        p, n = f.mv.p, f.mv.n
        pm = p ** (2 * n)
        # psi_p(m * x_p / N^2): p-part of the fractional part
        num = (ms % pm) * (f.x_residue * f.cofactor_sq_inv % pm) % pm
        phases = phases + PSI_SIGN * (num / pm) + float(f.theta_phase.r)
    out[mask] = ram.amplitude * np.exp(2j * np.pi * phases[mask])
    return out


# -- evaluation and the sup-norm scan ----------------------------------------

def _cutoff(N: int, arch: ArchParams, y: float, eps: float = 0.1) -> int:
    """Tail cutoff: the asymptotic shape N^{2+eps}(T + T^{1/3})/(2 pi y),
    extended until the first omitted term is below e^{-30} of the kernel
    normalization (the decay is exponential past the kernel peak, but the
    asymptotic constant matters at desk-scale weights)."""
    T = arch.T
    R = max(8, math.ceil(N ** (2 + eps) * (T + T ** (1.0 / 3.0)) / (2 * math.pi * y)))
    lc = log_c_infty(arch)

    def log_term(m: int) -> float:
        return log_kappa(m * y / N**2, arch) - lc - 0.5 * math.log(m)

    while log_term(R) > -30.0 and R < 10**7:
        R = math.ceil(1.3 * R)
    return R


@dataclass
class PhiContext:
    """Precomputed per-(ram, coeffs, arch) state for repeated evaluations."""

    ram: RamifiedData
    coeffs: CoefficientSource
    arch: ArchParams
    adjoint_value: float = 1.0

    @property
    def prefactor(self) -> float:
        return math.sqrt(2 * ZETA2 / self.adjoint_value)

    def term_magnitudes(self, ms: np.ndarray, y: float, lam: np.ndarray) -> np.ndarray:
        """|m|^{-1/2} kappa(|m| y / N^2) |lambda(m)| amplitude / c_inf, per m."""
        N2 = self.ram.N**2
        lk = np.array([log_kappa(abs(int(m)) * y / N2, self.arch) for m in ms])
        return (self.prefactor * self.ram.amplitude
                * np.exp(lk - log_c_infty(self.arch))
                * np.abs(lam) / np.sqrt(np.abs(ms)))


def evaluate_phi(x: float, y: float, ram: RamifiedData, coeffs: CoefficientSource,
                 arch: ArchParams, adjoint_value: float = 1.0,
                 cutoff: int | None = None, check_stability: bool = False) -> complex:
    """The form at n(x) a(y): the progression-supported Fourier expansion

    sqrt(2 zeta(2)/adjoint) c_inf^{-1} sum_{m = b (N), 0<|m|<=R}
        |m|^{-1/2} e(m x / N^2) kappa(m y / N^2) lambda(m) lambda'(m).
    """
    if y <= 0:
        raise ConfigError("y must be positive")
    R = cutoff if cutoff is not None else _cutoff(ram.N, arch, y)
    val = _evaluate_phi_at(x, y, ram, coeffs, arch, adjoint_value, R)
    if check_stability:
        val2 = _evaluate_phi_at(x, y, ram, coeffs, arch, adjoint_value, 2 * R)
        scale = max(abs(val), abs(val2), 1e-300)
        if abs(val2 - val) / scale > 1e-8:
            raise ConfigError("tail instability: doubling the cutoff moved the value")
        val = val2
    return val


def _signed_progression(ram: RamifiedData, R: int, holomorphic: bool) -> np.ndarray:
    """All m with m == b (mod N), 0 < |m| <= R (positive only if holomorphic)."""
    all_m = np.arange(-R, R + 1) if not holomorphic else np.arange(1, R + 1)
    all_m = all_m[all_m != 0]
    if ram.N == 1:
        return all_m
    return all_m[all_m % ram.N == ram.b % ram.N]


def _evaluate_phi_at(x, y, ram, coeffs, arch, adjoint_value, R) -> complex:
    ms = _signed_progression(ram, R, arch.case == "holomorphic")
    if len(ms) == 0:
        return 0.0
    N2 = ram.N**2
    lam = np.array([coeffs.value(int(abs(m))) for m in ms])
    lamp = lambda_prime_fast(ms, ram)
    lc = log_c_infty(arch)
    kap = np.array([kappa(abs(int(m)) * y / N2, arch, sign=1 if m > 0 else -1)
                    * math.exp(-lc) for m in ms])
    phase = np.exp(2j * np.pi * x * ms / N2)
    pref = math.sqrt(2 * ZETA2 / adjoint_value)
    return complex(pref * np.sum(lam * lamp * kap * phase / np.sqrt(np.abs(ms))))


@dataclass
class ScanReport:
    N: int
    arch: ArchParams
    sup: float
    argmax: tuple[float, float]         # (x, y)
    witness: float                      # best single-term magnitude
    witness_m: int
    conductor: int                      # C = N^4
    ratio: float                        # sup / (C^{1/8} h)
    witness_ratio: float                # witness / (C^{1/8} h)
    rows: list = field(default_factory=list)   # (y, row sup, row witness)

    def as_dict(self):
        return {
            "N": self.N, "case": self.arch.case,
            "k": self.arch.k, "t": self.arch.t,
            "sup": self.sup, "argmax": list(self.argmax),
            "witness": self.witness, "witness_m": self.witness_m,
            "conductor": self.conductor, "ratio": self.ratio,
            "witness_ratio": self.witness_ratio,
        }


def scan_supnorm(ram: RamifiedData, coeffs: CoefficientSource, arch: ArchParams,
                 y_min: float = math.sqrt(3) / 2.0, y_max: float | None = None,
                 x_steps_per_period: int = 64, rows_per_decade: int = 256,
                 adjoint_value: float = 1.0, keep_rows: bool = False) -> ScanReport:
    """Grid maximum of |phi| over the generating domain: x over one period
    [0, N^2), y log-spaced.  Per y-row the x-scan is an exact FFT of the
    progression coefficients (the grid is refined per row so that no two
    contributing frequencies collide mod the transform length).
    """
    N = ram.N
    N2 = N * N
    if y_max is None:
        y_max = max(2.0, N2 * arch.T)
    n_rows = max(2, int(rows_per_decade * math.log10(y_max / y_min)) + 1)
    ys = np.exp(np.linspace(math.log(y_min), math.log(y_max), n_rows))
    lc = log_c_infty(arch)
    pref = math.sqrt(2 * ZETA2 / adjoint_value)
    holo = arch.case == "holomorphic"
    base_X = x_steps_per_period * max(N2, 1)

    R_global = _cutoff(N, arch, y_min)
    lam_all = coeffs.values_upto(R_global)

    sup, argmax = -1.0, (0.0, ys[0])
    witness, witness_m = -1.0, 0
    rows = []
    for yv in ys:
        R = _cutoff(N, arch, float(yv))
        ms = _signed_progression(ram, R, holo)
        if len(ms) == 0:
            continue
        am = np.abs(ms)
        lam = lam_all[am]
        lamp = lambda_prime_fast(ms, ram)
        kap = np.array([kappa(a * yv / N2, arch, sign=1 if s > 0 else -1)
                        for a, s in zip(am, np.sign(ms))])
        c = pref * lam * lamp * kap * math.exp(-lc) / np.sqrt(am)
        # row witness: best single Fourier coefficient magnitude
        mags = np.abs(c)
        j = int(np.argmax(mags))
        if mags[j] > witness:
            witness, witness_m = float(mags[j]), int(ms[j])
        # exact x-grid evaluation: fold coefficients into a transform long
        # enough that frequencies in [-R, R] stay distinct
        X = base_X
        while X <= 2 * R + 1:
            X *= 2
        F = np.zeros(X, dtype=complex)
        np.add.at(F, ms % X, c)
        vals = np.fft.ifft(F) * X     # sum_m c_m e^{2 pi i m j / X}
        av = np.abs(vals)
        jx = int(np.argmax(av))
        row_sup = float(av[jx])
        if row_sup > sup:
            sup, argmax = row_sup, (jx * N2 / X, float(yv))
        if keep_rows:
            rows.append((float(yv), row_sup, float(mags[j])))
    C = max(N, 1) ** 4
    scale = C ** (1.0 / 8.0) * arch.h_value
    return ScanReport(N, arch, sup, argmax, witness, witness_m, C,
                      sup / scale, witness / scale, rows)


# -- classical congruence group ----------------------------------------------

def build_D(mvs: list[MinimalVectorSpec]) -> int:
    """CRT lift of the local alpha's: D = alpha_p mod p^{n_p}."""
    residues = [mv.torus.alpha % mv.p**mv.n for mv in mvs]
    moduli = [mv.p**mv.n for mv in mvs]
    return _crt(residues, moduli)


def gamma_TD(gamma, mvs: list[MinimalVectorSpec], N: int | None = None,
             D: int | None = None):
    """Classical congruence test and character: gamma integral with det 1 is a
    member iff a == d and c == -b D (mod N); the character is the product of
    the inverse local chi's.  Returns (member, chi or None).
    """
    a, b, c, d = (int(v) for v in np.asarray(gamma).ravel())
    if a * d - b * c != 1:
        raise ConfigError("gamma must have determinant 1")
    if N is None:
        N = 1
        for mv in mvs:
            N *= mv.p**mv.n
    if D is None:
        D = build_D(mvs)
    if (a - d) % N != 0 or (c + b * D) % N != 0:
        return False, None
    chi = UnitRoot.one()
    for mv in mvs:
        g = Mat2Local.from_rationals(mv.p, (a, b, c, d), mv.torus.precision)
        chi = chi * chi_value(mv, g).inverse()
    return True, chi
