"""Context tables and small dynamics constants frozen into test_mermin.cpp
and test_dynamics.cpp."""

import numpy as np


def contexts(N, blocks):
    # blocks = [n_0, n_1, ..., n_M]; party j (0-based) in variation k uses the
    # largest m with (j + k - 1) mod N >= prefix(m)
    M = len(blocks) - 1
    prefix = [sum(blocks[:m]) for m in range(M + 1)]
    def mj(j):
        return max(m for m in range(M + 1) if j >= prefix[m])
    out = [[0] * N]
    for k in range(1, N + 1):
        out.append([mj((j + (k - 1)) % N) for j in range(N)])
    return out


print("Z2 2y=1 N=3: blocks [1,2] ->", contexts(3, [1, 2]))
print("Z4 2y=2? no: blocks [3,2] N=5 ->", contexts(5, [3, 2]))
print("Z3 2y=1 N=4: blocks [2,2] ->", contexts(4, [2, 2]))

# quantum check for the original argument: GHZ_3 with phase exp(i*pi/2) on
# parties given choice 1; Born in the X basis; compare with the uniform-coset
# table.
def quantum_tables(d, t, N, ctxs):
    xi = np.exp(2j * np.pi / (d * t)) if t else None
    beta = [np.ones(d), np.array([xi ** j for j in range(d)])]
    w = np.exp(2j * np.pi / d)
    tables = []
    for ctx in ctxs:
        amp = np.ones(d, dtype=complex)
        for m in ctx:
            amp = amp * beta[m]
        # joint outcome (k_1..k_N): A = sum_g amp[g] * conj(w^(g*sum k))
        table = {}
        for flat in range(d ** N):
            ks = []
            f = flat
            for _ in range(N):
                ks.append(f % d)
                f //= d
            ks = ks[::-1]
            A = sum(amp[g] * np.conj(w ** (g * sum(ks))) for g in range(d))
            p = abs(A) ** 2 / d ** N / d  # norms d per party, state norm^2 = d
            if p > 1e-12:
                table[tuple(ks)] = p
        tables.append(table)
    return tables


for (d, t, N) in [(2, 1, 3), (2, 1, 2)]:
    pass

d, t, N = 2, 1, 3  # trivial argument 1*y=1 (solution y=1), sanity
d, t, N = 2, 1, 3

# Mermin original: d=2, t=1? no: system 2y=1 means t-coefficient 2.
# blocks [N - 2, 2]; beta solves 2y=1 in the torus: y = 1/4 -> phase i.
def mermin_z2_quantum():
    N = 3
    ctxs = contexts(N, [1, 2])
    i = 1j
    beta = [np.ones(2), np.array([1, i])]
    tables = []
    for ctx in ctxs:
        amp = np.ones(2, dtype=complex)
        for m in ctx:
            amp = amp * beta[m]
        table = {}
        for flat in range(8):
            ks = [(flat >> (2 - j)) & 1 for j in range(3)]
            A = sum(amp[g] * (-1) ** (g * sum(ks)) for g in range(2))
            p = abs(A) ** 2 / 8 / 2
            table[tuple(ks)] = round(p, 9)
        tables.append(table)
    return ctxs, tables


ctxs, tables = mermin_z2_quantum()
for c, tab in zip(ctxs, tables):
    nz = {k: v for k, v in tab.items() if v > 1e-12}
    par = {sum(k) % 2 for k in nz}
    print("ctx", c, "support parity", par, "weights", set(nz.values()))

# dynamics: T=2, U1 = X -> ergodic projectors (I+X)/2, (I-X)/2
X = np.array([[0, 1], [1, 0]], dtype=complex)
P0 = (np.eye(2) + X) / 2
P1 = (np.eye(2) - X) / 2
print("P0 =", P0.real.tolist(), " P1 =", P1.real.tolist())
print("stone U1 =", (P0 - P1).real.tolist())

# feynman: T=2 gates (X, X), psi0=|0> -> history |0>|t=0> + |1>|t=1>
# propagator W1 (system (x) clock, clock second factor):
W1 = np.zeros((4, 4), dtype=complex)
for tt in range(2):
    for a in range(2):
        for b in range(2):
            if X[a, b]:
                W1[a * 2 + (tt + 1) % 2, b * 2 + tt] = X[a, b]
print("W1 =", W1.real.astype(int).tolist())
h = np.zeros(4, dtype=complex)
h[0 * 2 + 0] = 1  # |0>|0>
h[1 * 2 + 1] = 1  # |1>|1>
print("W1 @ history == history:", np.allclose(W1 @ h, h))
