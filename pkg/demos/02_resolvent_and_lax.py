"""The basic matrix resolvent and the polynomial Lax matrices.

The resolvent is a 2x2 series with trace 1 and determinant 0 whose
coefficients solve a simple recursion; its polynomial parts assemble the Lax
matrices of the flows, and the zero-curvature equations close the circle.
"""
from dkdv.resolvent import (
    assemble_resolvent,
    lax_matrix,
    mr_recursion,
    toda_reduced_series,
    verify_resolvent_equations,
    verify_toda_identities,
    verify_zero_curvature,
)

rs = mr_recursion(4)
print("recursion output (base site):")
for j in range(4):
    print(f"  a[{j}] =", rs.a[j].to_text())
    print(f"  c[{j}] =", rs.c[j].to_text())
print()

R = assemble_resolvent(rs, 0)
print("assembled resolvent entries through depth 2:")
for i, j, e in R.entries():
    terms = "  ".join(f"lam^{p}: {e.coeff(p).to_text()}" for p in (0, -1, -2))
    print(f"  ({i},{j})  {terms}")
print()

print("Lax matrix of the first flow (two constructions compared internally):")
V = lax_matrix(1, rs).mat
for i, j, e in V.entries():
    print(f"  ({i},{j}) =", {p: v.to_text() for p, v in sorted(e.c.items())})
print()

print("defining equations, intertwining, zero curvature:")
print(" ", verify_resolvent_equations(6).summary())
print(" ", verify_zero_curvature(3).summary())
print()

A, G = toda_reduced_series(5)
print("even-reduction series (diagonal / lower-left):")
print("  A:", {p: v.to_text() for p, v in sorted(A.c.items())})
print("  G:", {p: v.to_text() for p, v in sorted(G.c.items())})
print(" ", verify_toda_identities(5).summary())
