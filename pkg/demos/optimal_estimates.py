"""Best guesses for the state before and after a measurement.

After reading outcome s, the optimal estimate of the post-measurement state
is the top eigenvector of M_s M_s^dag and the optimal estimate of the
pre-measurement state is the top eigenvector of E_s = M_s^dag M_s. The two
are linked by the unitary part of the polar decomposition M_s = U_s sqrt(E_s):
applying U_s to the pre-estimate gives the post-estimate.
"""

import numpy as np

from qmeter import catalog, estimator

X = np.array([[0, 1], [1, 0]], dtype=complex)


def show_device(name, device):
    print(f"\n=== {name} ===")
    for s in range(1, device.n_outcomes + 1):
        pair = estimator.estimate_pair(device, s)
        print(f"outcome {s}: a_max = {pair.a_max:.6f}  degenerate = {pair.degenerate}")
        print(f"  chi_pre  = {np.round(pair.chi_pre, 6)}")
        print(f"  chi_post = {np.round(pair.chi_post, 6)}")
        check = estimator.verify_estimate_relations(device, s)
        if check.skipped:
            print(f"  link check skipped: {check.reason}")
        else:
            print(f"  U_s chi_pre = chi_post: {check.unitary_link_ok};"
                  f"  M_s chi_pre ~ chi_post: {check.kraus_link_ok}")


# For a pure device (all Kraus operators positive) the two estimates agree.
show_device("unsharp qubit, strength 0.6", catalog.unsharp_qubit(0.6))

# A unitary kick moves the post-estimate but not the pre-estimate: the same
# information is extracted, the conditional state just gets rotated afterward.
kicked = catalog.with_kicks(catalog.unsharp_qubit(0.6), [X, np.eye(2)])
show_device("same device with a bit-flip kick on outcome '+'", kicked)

# The bi-orthogonal data behind the scenes: M_s = sum_i sqrt(a_i) |l_i><r_i|.
fac = kicked.bi_orthogonal_factors(1)
print("\nbi-orthogonal factors of the kicked outcome:")
print("eigenvalues:", fac.eigenvalues)
print("U_s =\n", np.round(fac.unitary.real, 6))
rebuilt = sum(
    np.sqrt(a) * np.outer(fac.left_basis[:, i], fac.right_basis[:, i].conj())
    for i, a in enumerate(fac.eigenvalues)
)
print("reconstruction error:", np.linalg.norm(rebuilt - kicked.kraus_op(1)))
