"""Ideal-chain topologies on k[x, y].

The (x y^n) chain is strictly coarser than the (xy)-adic one, a genuine
failure of cofinality.  The (x^n, y^n) chain is cofinal with (x, y)^n, but
a six-stage window is too short to see it.  Every verdict here is relative
to the finite window of stages that was built.

    python3 demos/ideal_towers.py
"""

from prokit.algebra import PolyRing
from prokit.ideals import Ideal
from prokit.towers import RingTower, adic_powers, check_adic, check_admissible, check_cofinal

R = PolyRing(["x", "y"])
x, y = R.gens
WINDOW = 6

xchain = RingTower(R, [Ideal(R, [x**n]) for n in range(1, WINDOW + 1)], label="(x^n)")
box = RingTower(R, [Ideal(R, [x**n, y**n]) for n in range(1, WINDOW + 1)], label="(x^n, y^n)")

print(xchain)
print("  admissible:", check_admissible(xchain, kmax=8))
print("  adic for (x):", check_adic(xchain, Ideal(R, [x]), kmax=8))

print(box)
print("  admissible:", check_admissible(box, kmax=8))
# (x^n, y^n) contains (x, y)^(2n-1), which for n >= 4 lies past the window,
# so this negative verdict is an artifact of truncation (see below)
print("  adic for (x, y):", check_adic(box, Ideal(R, [x, y]), kmax=8))

xyn = [Ideal(R, [x * y**n]) for n in range(1, WINDOW + 1)]
xy_adic = adic_powers(Ideal(R, [x * y]), WINDOW)
print("(x y^n) against the (xy)-adic chain:")
# (x^2 y^2) contains no x y^n, so the adic chain is strictly finer
print(" ", check_cofinal(xyn, xy_adic, names=("chain", "adic")))

# (x^n, y^n) and (x, y)^n define the same topology, but (x^4, y^4) only
# contains (x, y)^7, beyond a six-stage window; the verdict is window-relative
v = check_cofinal(box.chain, adic_powers(Ideal(R, [x, y]), WINDOW), names=("box", "adic"))
print("box against the (x, y)-adic chain, window", WINDOW, ":", v)
print("  window metadata:", v.metadata)

# embedded points: x * (x, y)^n is not admissible in n steps of nilpotency
emb = RingTower(R, [Ideal(R, [x]) * Ideal(R, [x, y]) ** n for n in range(3)])
print("x*(x,y)^n, n = 0..2:", check_admissible(emb, kmax=2))
