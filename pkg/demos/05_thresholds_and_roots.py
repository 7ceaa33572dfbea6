"""Threshold functions and pinching roots behind the gap statements."""

from minimal_gap_lab.gaps import (
    TAU_STAR,
    calabi_constants,
    pinching_roots,
    threshold_T,
    threshold_table,
)

print("tau* = sqrt(9 + 3 sqrt 5)/4 =", TAU_STAR)
print()
print(f"{'tau':>8} {'T_A':>10} {'T_B':>10} {'That_A':>10} {'That_B':>10} {'sigma':>10}")
for tau in (TAU_STAR, 0.991, 0.995, 1.0):
    T_A, T_B, ha, hb, sigma = threshold_T(tau)
    print(f"{tau:>8.5f} {T_A:>10.6f} {T_B:>10.6f} {ha:>10.6f} {hb:>10.6f} {sigma:>10.6f}")

table = threshold_table(10_000)
table.check_monotone()
print("\nThat_A nondecreasing and That_B nonincreasing on a 10^4 grid: verified")
print(f"endpoints: That_A(1) = {threshold_T(1.0)[2]:.15f} (= 20/9),"
      f" That_B(1) = {threshold_T(1.0)[3]:.15f}")
print("flat-normal-bundle consequence: u > 2 forces max u >= 20/9 = "
      f"{20 / 9:.12f}")

print()
print(f"{'gamma':>8} {'S0':>12} {'S0_prime':>12} {'(40+12g)/(18+9g)':>18}")
for gamma in (0.0, 2.0 / 3.0, 2.0, 4.0):
    r = pinching_roots(gamma)
    print(f"{gamma:>8.4f} {r.S0:>12.8f} {r.S0_prime:>12.8f} {r.gamma_bound:>18.8f}")

print()
print("Calabi sphere ladder (r = 1):")
print(f"{'s':>3} {'K = 2/s(s+1)':>14} {'S = 2-2K':>10} {'u = 3S/2':>10} {'ambient':>8}")
for s in range(1, 7):
    c = calabi_constants(s)
    print(f"{s:>3} {str(c.K):>14} {str(c.S):>10} {str(c.u):>10} "
          f"S^{c.ambient_dim:<6}")
print("\nthe u ladder 0, 2, 5/2, 27/10, ... is the discrete spectrum the")
print("gap theorems pin down; 5/2 is the optimal second gap for 2-spheres.")
