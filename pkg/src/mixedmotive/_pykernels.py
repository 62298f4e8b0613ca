"""Pure-Python reference kernels.

These are the fallback implementations of the hot per-step math, used when the
compiled extension is unavailable (or when MIXEDMOTIVE_PURE=1). Every function
here mirrors its compiled twin operation-for-operation: the same libm calls in
the same order, so the two backends produce bit-identical doubles. Keep the
two files in sync; tests/test_kernel_parity.py enforces the equivalence.
"""

import math

BACKEND = "pure"


def log_value(a, theta):
    return theta * math.log(1.0 + a)


def power_value(a, beta):
    if a == 0.0:
        return 0.0
    return math.pow(a, beta)


def geometric_mean(actions):
    n = len(actions)
    prod = 1.0
    for i in range(n):
        ai = float(actions[i])
        if ai == 0.0:
            return 0.0
        prod *= ai
    return math.pow(prod, 1.0 / n)


def base_payoffs(actions, endowments, theta, beta, use_log, gamma, out):
    """Endowment-retention payoff: (e_i - a_i) + f(a_i) + (gamma/n) * g(a)."""
    n = len(actions)
    g = geometric_mean(actions)
    share = (gamma / n) * g
    for i in range(n):
        ai = float(actions[i])
        if use_log:
            f = theta * math.log(1.0 + ai)
        else:
            f = 0.0 if ai == 0.0 else math.pow(ai, beta)
        out[i] = (float(endowments[i]) - ai) + f + share
    return g


def team_payoffs(actions, omega, beta, cost, out):
    """Share-of-output payoff: Q(a)/n - c*a_i with Q = omega * (sum a)^beta."""
    n = len(actions)
    total = 0.0
    for i in range(n):
        total += float(actions[i])
    q = 0.0 if total == 0.0 else omega * math.pow(total, beta)
    share = q / n
    for i in range(n):
        out[i] = share - cost * float(actions[i])
    return q


def trust_update_matrix(T, R, actions, baselines, kappa, lam_plus, lam_minus, mu):
    """In-place asymmetric trust update plus reputation smoothing (diagonal untouched)."""
    n = len(actions)
    for j in range(n):
        s = math.tanh(kappa * (float(actions[j]) - float(baselines[j])))
        sp = max(0.0, s)
        sn = max(0.0, -s)
        for i in range(n):
            if i == j:
                continue
            t = T[i, j]
            t = t + lam_plus * sp * (1.0 - t) - lam_minus * sn * t
            T[i, j] = t
            R[i, j] = (1.0 - mu) * R[i, j] + mu * t


def trust_path_extrema(t0, signals, lam_plus, lam_minus):
    """Run many signal sequences through the trust update; return (min, max) seen.

    `signals` is a 2-D (n_sequences, n_steps) array of raw signals in [-1, 1].
    Vectorized across sequences; update uses only exact IEEE ops so the result
    is bit-identical to the compiled scalar loop.
    """
    import numpy as np

    t = np.full(signals.shape[0], t0, dtype=np.float64)
    tmin = t0
    tmax = t0
    for step in range(signals.shape[1]):
        s = signals[:, step]
        sp = np.maximum(0.0, s)
        sn = np.maximum(0.0, -s)
        t = t + lam_plus * sp * (1.0 - t) - lam_minus * sn * t
        lo = float(t.min())
        hi = float(t.max())
        if lo < tmin:
            tmin = lo
        if hi > tmax:
            tmax = hi
    return tmin, tmax


def reciprocity_modifiers(T, D, signals, rho0, eta, kappa_r, lam_r, omega_amp, out):
    """Trust-gated, dependency-amplified tanh response, summed over partners."""
    n = len(signals)
    for i in range(n):
        acc = 0.0
        for j in range(n):
            if j == i:
                continue
            dij = D[i, j]
            rho = rho0 * math.pow(dij, eta) if dij != 0.0 else 0.0
            phi = math.tanh(kappa_r * float(signals[j]))
            acc += T[i, j] * (1.0 + omega_amp * dij) * rho * phi
        out[i] = lam_r * acc


def integrated_rewards(pi, D, modifiers, out):
    """out[i] = pi_i + sum_{j != i} D_ij * pi_j + M_i."""
    n = len(pi)
    for i in range(n):
        acc = 0.0
        for j in range(n):
            if j == i:
                continue
            acc += D[i, j] * float(pi[j])
        out[i] = float(pi[i]) + acc + float(modifiers[i])
