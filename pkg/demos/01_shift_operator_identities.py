"""Walk through the shift-operator ring behind the lattice hierarchy.

The whole engine is built on two operators in the shift S (S f at site n is
f at site n+1):

    P = S + w[0] S^-1
    L = P^2 = S^2 + (w[1] + w[0]) + w[0] w[-1] S^-2

Their power coefficients satisfy a web of exact polynomial identities, and
the lattice flows arise as derivations d w[0]/d s_j built from them.
"""
from dkdv.diffop import (
    a_coeff,
    apply_derivation,
    kdv_flow,
    l_op,
    m_coeff,
    p_op,
    verify_flow_equivalence,
    verify_operator_identities,
)

print("P   =", p_op().to_text())
print("L   =", l_op().to_text())
print()

print("coefficients of L^j at the base site:")
for j in range(0, 4):
    print(f"  m[{j},0]  =", m_coeff(j, 0).to_text())
    print(f"  m[{j},-2] =", m_coeff(j, -2).to_text())
print()

print("coefficients of P^(l+1):")
for ell in range(0, 4):
    print(f"  A[{ell},1] =", a_coeff(ell, 1).to_text())
print()

print("the first flow and its action:")
d1 = kdv_flow(1)
print("  d w[0]/d s_1        =", d1.rhs0.to_text())
print("  d (w[1]+w[0])/d s_1 =", apply_derivation(d1, m_coeff(1, 0)).to_text())
print("  d (w[0]w[-1])/d s_1 =", apply_derivation(d1, m_coeff(1, -2)).to_text())
print()

print("identity suite through j = 4:")
rep = verify_operator_identities(4)
print(" ", rep.summary())
rep = verify_flow_equivalence(3)
print(" ", rep.summary())
