"""The exact polynomial kernel: arithmetic, differentiation, zero-testing.

Everything downstream rests on one primitive: a polynomial with rational
coefficients is zero iff its canonical term map is empty.  No epsilon, no
sampling.
"""

from fractions import Fraction

from minimal_gap_lab.ratpoly import RatPoly, poly_combine, poly_diff, poly_is_zero

x, y = RatPoly.variables("xy")

print("== basic arithmetic ==")
p = x + y
q = x - y
print("(x+y) + (x-y)  =", poly_combine(p, q, "add"))
print("(x+y) * (x-y)  =", poly_combine(p, q, "mul"))
print("d/dx (x^3-3x)  =", poly_diff(x ** 3 - 3 * x, "x"))

print()
print("== an identity proved by cancellation ==")
lhs = (x + y) ** 2
rhs = x ** 2 + 2 * x * y + y ** 2
print("(x+y)^2 - (x^2+2xy+y^2) is zero:", poly_is_zero(lhs - rhs))

print()
print("== rational coefficients stay exact ==")
r = Fraction(1, 3) * x ** 2 - Fraction(1, 6) * y
print("p   =", r)
print("6*p =", 6 * r)
print("p evaluated at x=1/2, y=7:",
      r.evaluate({"x": Fraction(1, 2), "y": Fraction(7)}))

print()
print("== debug dump format (coeff  e1 e2 ... en) ==")
print((Fraction(3, 2) * x ** 2 * y - y + 5).dump())
