"""Network assembly, exact Born-rule behaviors, I-values and scores.

Trilocal scenario: three sources S1, S2, S3, each emitting three qubits, feed
five parties.  Party order is A (1 qubit), B (3), C (3), D (1), T (1); A, D,
T are extreme parties, B and C are intermediates.  Source order before
wiring is [A, B1, C1 | B2, C2, D | B3, C3, T], so the destination of source
qubits (0..8) is (0, 1, 4, 2, 5, 7, 3, 6, 8).

The general n-local scenario has n sources of n qubits each, n extreme
parties A_1..A_n and n-1 intermediates B_1..B_{n-1}; source i sends qubit 0
to A_i and qubit j to B_j.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import kron, normalized, partial_trace, permute_qubits
from .measurements import partial_ghz_observable

WIRING = (0, 1, 4, 2, 5, 7, 3, 6, 8)

NORM_TOL = 1e-10
NULL_EVENT_TOL = 1e-12
ZERO_IVALUE_TOL = 1e-14


def _as_density(state):
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        v = normalized(state)
        return np.outer(v, v.conj())
    return state


def _is_vector(state):
    return np.asarray(state).ndim == 1


# ---------------------------------------------------------------------------
# Behavior


@dataclass(frozen=True)
class Behavior:
    """Conditional probability table of a network scenario.

    `probabilities` has one binary axis per party for settings followed by
    one binary axis per party for outcomes, parties in a fixed order;
    `extreme_parties` / `intermediate_parties` give the positions of the
    two party kinds within that order.
    """

    probabilities: np.ndarray
    extreme_parties: tuple
    intermediate_parties: tuple

    @property
    def num_parties(self):
        return len(self.extreme_parties) + len(self.intermediate_parties)


@dataclass(frozen=True)
class IValue:
    indices: tuple
    k: int
    value: float


@dataclass(frozen=True)
class ScoreReport:
    """Best inequality value with the arg-max index tuples.

    `tuple_k0` / `tuple_k1` are the intermediate-setting tuples of the two
    I-values entering the best inequality; `i_values` is the full table
    indexed by those tuples plus the parity bit k.
    """

    score: float
    tuple_k0: tuple
    tuple_k1: tuple
    i_values: np.ndarray
    root: int


def correlator_table(behavior):
    """Full correlators <prod (-1)^outcome> for every setting tuple."""
    p = behavior.num_parties
    table = behavior.probabilities.reshape(2 ** p, 2 ** p)
    signs = np.array([(-1.0) ** bin(o).count("1") for o in range(2 ** p)])
    return (table @ signs).reshape((2,) * p)


def ivalue_table(behavior):
    """I-values indexed by intermediate setting tuple then parity bit k.

    I_{i_vec, k} = (1/2^n) sum over extreme settings of
    (-1)^(k * sum of extreme settings) * correlator.
    """
    corr = correlator_table(behavior)
    n_ext = len(behavior.extreme_parties)
    order = list(behavior.extreme_parties) + list(behavior.intermediate_parties)
    corr = np.transpose(corr, order)
    flat = corr.reshape(2 ** n_ext, -1)
    signs = np.array([(-1.0) ** bin(x).count("1") for x in range(2 ** n_ext)])
    i0 = flat.sum(axis=0) / 2 ** n_ext
    i1 = (signs @ flat) / 2 ** n_ext
    shape = (2,) * len(behavior.intermediate_parties)
    return np.stack([i0.reshape(shape), i1.reshape(shape)], axis=-1)


def i_value(behavior, i1, i2, k):
    """Single trilocal I-value I_{i1, i2, k}."""
    return IValue((i1, i2), k, float(ivalue_table(behavior)[i1, i2, k]))


def _score_from_table(ivals, root):
    n_int = ivals.ndim - 1
    a0 = np.abs(ivals[..., 0])
    a1 = np.abs(ivals[..., 1])
    a0 = np.where(a0 < ZERO_IVALUE_TOL, 0.0, a0)
    a1 = np.where(a1 < ZERO_IVALUE_TOL, 0.0, a1)
    t0 = np.unravel_index(np.argmax(a0), a0.shape)
    t1 = np.unravel_index(np.argmax(a1), a1.shape)
    score = a0[t0] ** (1.0 / root) + a1[t1] ** (1.0 / root)
    return ScoreReport(float(score), tuple(t0), tuple(t1), ivals, root)


def trilocal_score(behavior):
    """Max over the 16 tuples of |I_{i1,i2,0}|^(1/3) + |I_{j1,j2,1}|^(1/3)."""
    return _score_from_table(ivalue_table(behavior), len(behavior.extreme_parties))


def local_score(behavior):
    """Max over the 16 tuples of |I_{i1,i2,0}| + |I_{j1,j2,1}|."""
    return _score_from_table(ivalue_table(behavior), 1)


# ---------------------------------------------------------------------------
# Expectation-table engines
#
# A behavior is reconstructed from the expectations of all operator subsets:
# P(outcomes | settings) = 2^-p * sum over party subsets S of
# (-1)^(outcomes . S) <prod_{i in S} O_i>.  The expectation table C is
# indexed per party by 0 (identity), 1 (observable at setting 0) or
# 2 (observable at setting 1).


def _expectation_table_dense(rho, party_dims, party_ops):
    p = len(party_dims)
    rho_t = np.asarray(rho, dtype=complex).reshape(tuple(party_dims) * 2)
    out = np.empty((3,) * p, dtype=complex)
    for combo in itertools.product((0, 1, 2), repeat=p):
        args = []
        bra = list(range(p))
        ket = [i + p if combo[i] else i for i in range(p)]
        args.append(rho_t)
        args.append(bra + ket)
        for i, ch in enumerate(combo):
            if ch:
                args.append(np.asarray(party_ops[i][ch - 1], dtype=complex))
                args.append([ket[i], bra[i]])
        out[combo] = np.einsum(*args, [], optimize=True)
    return out


def _expectation_table_pure(psi, party_dims, party_ops):
    p = len(party_dims)
    psi_t = np.asarray(psi, dtype=complex).reshape(tuple(party_dims))
    out = np.empty((3,) * p, dtype=complex)
    flat = psi_t.reshape(-1)

    def descend(vec, party, combo):
        if party == p:
            out[combo] = np.vdot(flat, vec.reshape(-1))
            return
        descend(vec, party + 1, combo + (0,))
        for ch in (1, 2):
            op = np.asarray(party_ops[party][ch - 1], dtype=complex)
            moved = np.tensordot(op, vec, axes=([1], [party]))
            moved = np.moveaxis(moved, 0, party)
            descend(moved, party + 1, combo + (ch,))

    descend(psi_t, 0, ())
    return out


def _walsh_matrix(p):
    idx = np.arange(2 ** p)
    pop = np.zeros((2 ** p, 2 ** p))
    for o in idx:
        pop[o] = [bin(o & s).count("1") for s in idx]
    return (-1.0) ** pop


def _behavior_from_expectations(expect, p):
    walsh = _walsh_matrix(p)
    probs = np.empty((2,) * p + (2,) * p)
    for setting in itertools.product((0, 1), repeat=p):
        sel = expect
        for axis, s in enumerate(setting):
            sel = np.take(sel, (0, 1 + s), axis=axis)
        vec = np.real(sel.reshape(-1))
        probs[setting] = (walsh @ vec / 2 ** p).reshape((2,) * p)
    return probs


# ---------------------------------------------------------------------------
# Trilocal network


@dataclass(frozen=True)
class TrilocalNetwork:
    """Three 3-qubit sources in literal order (rho_AB1C1, rho_B2C2D, rho_B3C3T)."""

    source_states: tuple
    pure_sources: tuple = None

    @staticmethod
    def from_states(s1, s2, s3):
        states = (s1, s2, s3)
        pure = None
        if all(_is_vector(s) for s in states):
            pure = tuple(normalized(np.asarray(s, dtype=complex)) for s in states)
        return TrilocalNetwork(tuple(_as_density(s) for s in states), pure)

    @staticmethod
    def from_role_states(s1, s2, s3):
        """Sources given in role order (extreme wire, B wire, C wire).

        Source 1 already has its extreme (A) first; sources 2 and 3 are
        reordered to the literal (B, C, extreme) qubit order.
        """
        to_literal = (2, 0, 1)
        return TrilocalNetwork.from_states(
            s1,
            permute_qubits(np.asarray(s2, dtype=complex), to_literal),
            permute_qubits(np.asarray(s3, dtype=complex), to_literal))

    @staticmethod
    def from_shared_state(state):
        """All three sources emit the same role-ordered state."""
        return TrilocalNetwork.from_role_states(state, state, state)


def assemble(net):
    """The 512x512 network state in party order [A | B | C | D | T]."""
    full = kron(*net.source_states)
    return permute_qubits(full, WIRING)


def _assemble_pure(net):
    full = net.pure_sources[0]
    for s in net.pure_sources[1:]:
        full = np.kron(full, s)
    return permute_qubits(full, WIRING)


@dataclass(frozen=True)
class SettingsBundle:
    """Two observables per party: Bloch pairs for A, D, T and GHZ groupings
    for B and C."""

    a: tuple
    b: tuple
    c: tuple
    d: tuple
    t: tuple

    def party_operators(self):
        def pair(obs):
            return [o.matrix() for o in obs]

        def gpair(groups):
            return [partial_ghz_observable(g) for g in groups]

        return [pair(self.a), gpair(self.b), gpair(self.c),
                pair(self.d), pair(self.t)]


TRILOCAL_DIMS = (2, 8, 8, 2, 2)
TRILOCAL_EXTREMES = (0, 3, 4)
TRILOCAL_INTERMEDIATES = (1, 2)


def behavior(net, settings):
    """Exact Born-rule behavior P(a,b,c,d,e | x,y,z,w,u)."""
    ops = settings.party_operators()
    if net.pure_sources is not None:
        expect = _expectation_table_pure(_assemble_pure(net), TRILOCAL_DIMS, ops)
    else:
        expect = _expectation_table_dense(assemble(net), TRILOCAL_DIMS, ops)
    probs = _behavior_from_expectations(expect, 5)
    return Behavior(probs, TRILOCAL_EXTREMES, TRILOCAL_INTERMEDIATES)


def swapped_state(net, settings, y, b_out, z, c_out):
    """Conditional state of (A, D, T) given intermediate settings/outcomes.

    Returns (chi, probability); raises on conditioning on a null event.
    """
    rho = assemble(net)
    eye8 = np.eye(8, dtype=complex)
    ob = partial_ghz_observable(settings.b[y])
    oc = partial_ghz_observable(settings.c[z])
    pi_b = (eye8 + (-1) ** b_out * ob) / 2
    pi_c = (eye8 + (-1) ** c_out * oc) / 2
    eye2 = np.eye(2, dtype=complex)
    proj = kron(eye2, pi_b, pi_c, eye2, eye2)
    sub = proj @ rho @ proj
    prob = float(np.real(np.trace(sub)))
    if prob < NULL_EVENT_TOL:
        raise ValueError("conditioning on a null event (probability %g)" % prob)
    chi = partial_trace(sub, 9, {0, 7, 8}) / prob
    return chi, prob


# ---------------------------------------------------------------------------
# n-local networks


@dataclass(frozen=True)
class NLocalNetwork:
    """n sources of n qubits; source qubit 0 feeds extreme A_i, qubit j
    feeds intermediate B_j.  Source states are given in that role order."""

    n: int
    source_states: tuple
    pure_sources: tuple = None

    @staticmethod
    def from_states(n, states):
        if n not in (2, 3, 4):
            raise ValueError("supported network sizes are n in {2, 3, 4}")
        states = tuple(states)
        if len(states) != n:
            raise ValueError("expected %d source states" % n)
        pure = None
        if all(_is_vector(s) for s in states):
            pure = tuple(normalized(np.asarray(s, dtype=complex)) for s in states)
        return NLocalNetwork(n, tuple(_as_density(s) for s in states), pure)


@dataclass(frozen=True)
class NLocalSettings:
    """Bloch pairs for the n extremes, grouping pairs for the n-1
    intermediates (labels are n-bit tuples)."""

    extremes: tuple
    intermediates: tuple

    def extreme_operators(self):
        return [[o.matrix() for o in pair] for pair in self.extremes]

    def intermediate_operators(self):
        return [[partial_ghz_observable(g) for g in pair]
                for pair in self.intermediates]


def _contract_network(n, rho_tensors, int_ops, ext_ops):
    """Contract the factored network with per-party operator choices.

    int_ops: list over intermediates B_1..B_{n-1} of a 2^n x 2^n matrix or
    None for identity.  ext_ops: list over extremes of a 2x2 matrix, None
    for identity, or the string "open" to leave that extreme's indices
    uncontracted.  Returns a scalar, or with open extremes a tensor with
    axes (ket_1..ket_n, bra_1..bra_n) of the open extremes so that the
    expectation is sum(R * kron(extreme observables)).

    The contraction order (source 1, then each intermediate operator, then
    the remaining sources) keeps every intermediate tensor small.
    """

    def s_id(i, j):
        return 2 * (i * n + j)

    def t_id(i, j):
        return 2 * (i * n + j) + 1

    def rho_ids(i):
        # identity intermediates tie ket to bra so einsum traces them out
        bra = [s_id(i, j) for j in range(n)]
        ket = [t_id(i, 0) if ext_ops[i] is not None else s_id(i, 0)]
        for j in range(1, n):
            ket.append(t_id(i, j) if int_ops[j - 1] is not None else s_id(i, j))
        return bra + ket

    def traced(tensor, ids):
        # identity ties repeat an id within one tensor; sum those axes out
        if len(set(ids)) == len(ids):
            return tensor, ids
        out = [x for x in ids if ids.count(x) == 1]
        return np.einsum(tensor, ids, out), out

    cur, cur_ids = traced(rho_tensors[0], rho_ids(0))

    def absorb(tensor, ids):
        nonlocal cur, cur_ids
        tensor, ids = traced(tensor, ids)
        shared = set(cur_ids) & set(ids)
        out = [x for x in cur_ids if x not in shared]
        out += [x for x in ids if x not in shared]
        cur = np.einsum(cur, cur_ids, tensor, ids, out)
        cur_ids = out

    for j in range(1, n):
        op = int_ops[j - 1]
        if op is not None:
            op_t = np.asarray(op, dtype=complex).reshape((2,) * (2 * n))
            absorb(op_t, [t_id(i, j) for i in range(n)]
                   + [s_id(i, j) for i in range(n)])
    for i in range(1, n):
        absorb(rho_tensors[i], rho_ids(i))
    for i in range(n):
        op = ext_ops[i]
        if op is not None and not isinstance(op, str):
            absorb(np.asarray(op, dtype=complex), [t_id(i, 0), s_id(i, 0)])
    is_open = [isinstance(op, str) for op in ext_ops]
    open_ids = [t_id(i, 0) for i in range(n) if is_open[i]]
    open_ids += [s_id(i, 0) for i in range(n) if is_open[i]]
    if not open_ids:
        return complex(np.einsum(cur, cur_ids, []))
    return np.einsum(cur, cur_ids, open_ids)


def _factored_expectation(n, rho_tensors, chosen_ops):
    """<prod of chosen party operators> on the factored network state.

    chosen_ops: list over parties (n extremes then n-1 intermediates) of an
    operator matrix or None for identity.
    """
    return _contract_network(n, rho_tensors, chosen_ops[n:], chosen_ops[:n])


def _nlocal_rho_tensors(net):
    return [np.asarray(s, dtype=complex).reshape((2,) * (2 * net.n))
            for s in net.source_states]


def nlocal_behavior(net, settings):
    """Behavior with parties ordered (A_1..A_n, B_1..B_{n-1})."""
    n = net.n
    ext_ops = settings.extreme_operators()
    int_ops = settings.intermediate_operators()
    p = 2 * n - 1
    rho_tensors = _nlocal_rho_tensors(net)
    expect = np.empty((3,) * p, dtype=complex)
    for combo in itertools.product((0, 1, 2), repeat=p):
        chosen = []
        for i in range(n):
            chosen.append(None if combo[i] == 0 else ext_ops[i][combo[i] - 1])
        for j in range(n - 1):
            ch = combo[n + j]
            chosen.append(None if ch == 0 else int_ops[j][ch - 1])
        expect[combo] = _factored_expectation(n, rho_tensors, chosen)
    probs = _behavior_from_expectations(expect, p)
    return Behavior(probs, tuple(range(n)), tuple(range(n, 2 * n - 1)))


def nlocal_i_value(behavior_, indices, k):
    table = ivalue_table(behavior_)
    return IValue(tuple(indices), k, float(table[tuple(indices) + (k,)]))


def nlocal_score(behavior_):
    """Max over 4^(n-1) tuples of |I|^(1/n) + |J|^(1/n)."""
    return _score_from_table(ivalue_table(behavior_),
                             len(behavior_.extreme_parties))


def nlocal_local_score(behavior_):
    """Max over 4^(n-1) tuples of |I| + |J|."""
    return _score_from_table(ivalue_table(behavior_), 1)


def nlocal_transfers(net, settings):
    """Transfer operators on the extremes for every intermediate setting.

    Returns an array R indexed by the intermediate setting tuple with
    R[y_vec] a 2^n x 2^n operator such that the full correlator is
    sum_ab R[y_vec][a, b] * (A_{x_1} x ... x A_{x_n})[a, b].
    """
    n = net.n
    int_ops = settings.intermediate_operators()
    rho_tensors = _nlocal_rho_tensors(net)
    out = np.empty((2,) * (n - 1) + (2 ** n, 2 ** n), dtype=complex)
    for yv in itertools.product((0, 1), repeat=n - 1):
        chosen = [int_ops[j][yv[j]] for j in range(n - 1)]
        r = _contract_network(n, rho_tensors, chosen, ["open"] * n)
        out[yv] = r.reshape(2 ** n, 2 ** n)
    return out


def transfer_ivalues(n, transfers, ext_obs):
    """I-value table from transfer operators and stacked extreme observables.

    ext_obs has shape (n, 2, 2, 2): party, setting, then the 2x2 matrix.
    Returns an array indexed by intermediate tuple then parity bit k.
    """
    # axes: y_1..y_{n-1}, ket a_1..a_n, bra b_1..b_n; contract one party at
    # a time with tensordot (cheaper than einsum inside optimizer loops)
    t = transfers.reshape((2,) * (n - 1) + (2,) * (2 * n))
    for i in range(n):
        t = np.tensordot(t, ext_obs[i], axes=([n - 1, 2 * n - 1 - i], [1, 2]))
    corr = np.real(t)
    flat = corr.reshape(-1, 2 ** n)
    signs = np.array([(-1.0) ** bin(x).count("1") for x in range(2 ** n)])
    i0 = flat.sum(axis=1) / 2 ** n
    i1 = (flat @ signs) / 2 ** n
    shape = (2,) * (n - 1)
    return np.stack([i0.reshape(shape), i1.reshape(shape)], axis=-1)


def trilocal_transfers(net, settings):
    """Trilocal transfer tensors from the dense 512x512 assembled state."""
    rho = assemble(net)
    eye2 = np.eye(2, dtype=complex)
    out = np.empty((2, 2) + (2,) * 6, dtype=complex)
    for y in (0, 1):
        ob = partial_ghz_observable(settings.b[y])
        for z in (0, 1):
            oc = partial_ghz_observable(settings.c[z])
            op = kron(eye2, ob, oc, eye2, eye2)
            prod = (rho @ op).reshape((2,) * 18)
            m = np.einsum(prod,
                          [0, 1, 2, 3, 4, 5, 6, 7, 8,
                           9, 1, 2, 3, 4, 5, 6, 10, 11],
                          [0, 7, 8, 9, 10, 11])
            out[y, z] = m
    return out


def trilocal_transfer_ivalues(transfers, ext_obs):
    """I[y, z, k] from trilocal transfer tensors.

    ext_obs has shape (3, 2, 2, 2) for parties (A, D, T); the transfer
    index convention matches trilocal_transfers.
    """
    # flat matmul chain instead of einsum: this runs inside optimizer
    # loops, where per-call contraction overhead dominates
    t2 = transfers.transpose(0, 1, 5, 2, 6, 3, 7, 4).reshape(4, 4, 4, 4)
    o0 = ext_obs[0].reshape(2, 4)
    o1 = ext_obs[1].reshape(2, 4)
    o2 = ext_obs[2].reshape(2, 4)
    t = (t2.reshape(64, 4) @ o2.T).reshape(4, 4, 4, 2)
    t = (t.transpose(0, 1, 3, 2).reshape(32, 4) @ o1.T).reshape(4, 4, 2, 2)
    t = (t.transpose(0, 2, 3, 1).reshape(16, 4) @ o0.T).reshape(4, 2, 2, 2)
    corr = np.real(t)  # axes (yz), u, w, x
    flat = corr.reshape(4, 8)
    signs = np.array([(-1.0) ** bin(v).count("1") for v in range(8)])
    i0 = (flat.sum(axis=1) / 8).reshape(2, 2)
    i1 = ((flat @ signs) / 8).reshape(2, 2)
    return np.stack([i0, i1], axis=-1)
