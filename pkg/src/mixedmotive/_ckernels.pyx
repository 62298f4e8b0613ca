# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the per-step simulation math.

Twin of _pykernels.py: same functions, same operation order, same libm calls,
so results are bit-identical to the pure-Python path. Any change here must be
mirrored there (tests/test_kernel_parity.py checks exact equality).
"""

from libc.math cimport log, pow, tanh

BACKEND = "compiled"


def log_value(double a, double theta):
    return theta * log(1.0 + a)


def power_value(double a, double beta):
    if a == 0.0:
        return 0.0
    return pow(a, beta)


def geometric_mean(double[:] actions):
    cdef Py_ssize_t n = actions.shape[0]
    cdef Py_ssize_t i
    cdef double prod = 1.0
    cdef double ai
    for i in range(n):
        ai = actions[i]
        if ai == 0.0:
            return 0.0
        prod *= ai
    return pow(prod, 1.0 / n)


def base_payoffs(double[:] actions, double[:] endowments, double theta,
                 double beta, bint use_log, double gamma, double[:] out):
    cdef Py_ssize_t n = actions.shape[0]
    cdef Py_ssize_t i
    cdef double prod = 1.0
    cdef double g = 0.0
    cdef double ai, f, share
    cdef bint zero = False
    for i in range(n):
        ai = actions[i]
        if ai == 0.0:
            zero = True
            break
        prod *= ai
    if not zero:
        g = pow(prod, 1.0 / n)
    share = (gamma / n) * g
    for i in range(n):
        ai = actions[i]
        if use_log:
            f = theta * log(1.0 + ai)
        else:
            f = 0.0 if ai == 0.0 else pow(ai, beta)
        out[i] = (endowments[i] - ai) + f + share
    return g


def team_payoffs(double[:] actions, double omega, double beta, double cost,
                 double[:] out):
    cdef Py_ssize_t n = actions.shape[0]
    cdef Py_ssize_t i
    cdef double total = 0.0
    cdef double q, share
    for i in range(n):
        total += actions[i]
    q = 0.0 if total == 0.0 else omega * pow(total, beta)
    share = q / n
    for i in range(n):
        out[i] = share - cost * actions[i]
    return q


def trust_update_matrix(double[:, :] T, double[:, :] R, double[:] actions,
                        double[:] baselines, double kappa, double lam_plus,
                        double lam_minus, double mu):
    cdef Py_ssize_t n = actions.shape[0]
    cdef Py_ssize_t i, j
    cdef double s, sp, sn, t
    for j in range(n):
        s = tanh(kappa * (actions[j] - baselines[j]))
        sp = s if s > 0.0 else 0.0
        sn = -s if -s > 0.0 else 0.0
        for i in range(n):
            if i == j:
                continue
            t = T[i, j]
            t = t + lam_plus * sp * (1.0 - t) - lam_minus * sn * t
            T[i, j] = t
            R[i, j] = (1.0 - mu) * R[i, j] + mu * t


def trust_path_extrema(double t0, double[:, :] signals, double lam_plus,
                       double lam_minus):
    cdef Py_ssize_t nseq = signals.shape[0]
    cdef Py_ssize_t nstep = signals.shape[1]
    cdef Py_ssize_t r, c
    cdef double t, s, sp, sn
    cdef double tmin = t0
    cdef double tmax = t0
    for r in range(nseq):
        t = t0
        for c in range(nstep):
            s = signals[r, c]
            sp = s if s > 0.0 else 0.0
            sn = -s if -s > 0.0 else 0.0
            t = t + lam_plus * sp * (1.0 - t) - lam_minus * sn * t
            if t < tmin:
                tmin = t
            if t > tmax:
                tmax = t
    return tmin, tmax


def reciprocity_modifiers(double[:, :] T, double[:, :] D, double[:] signals,
                          double rho0, double eta, double kappa_r,
                          double lam_r, double omega_amp, double[:] out):
    cdef Py_ssize_t n = signals.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc, dij, rho, phi
    for i in range(n):
        acc = 0.0
        for j in range(n):
            if j == i:
                continue
            dij = D[i, j]
            rho = rho0 * pow(dij, eta) if dij != 0.0 else 0.0
            phi = tanh(kappa_r * signals[j])
            acc += T[i, j] * (1.0 + omega_amp * dij) * rho * phi
        out[i] = lam_r * acc


def integrated_rewards(double[:] pi, double[:, :] D, double[:] modifiers,
                       double[:] out):
    cdef Py_ssize_t n = pi.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(n):
        acc = 0.0
        for j in range(n):
            if j == i:
                continue
            acc += D[i, j] * pi[j]
        out[i] = pi[i] + acc + modifiers[i]
