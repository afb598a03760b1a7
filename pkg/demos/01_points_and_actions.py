"""Eventually periodic points and the built-in actions.

Points of the binary Cantor set are stored exactly as preperiod +
repeating period.  The three built-in actions (binary odometer, first
Grigorchuk group, infinite dihedral group) act by finite-state
transducers, so every image is again eventually periodic.
"""

from fullgroup_lab import (
    apply_word,
    builtin_action,
    canonical_point,
    combine_actions,
    fragment_generators,
    random_points,
)
import random

print("== canonical forms ==")
print("011111...      ->", canonical_point("01", "1").label())
print("000000...      ->", canonical_point("", "00").label())
print("0110 1010 ...  ->", canonical_point("0110", "10").label())

print()
print("== the odometer is binary +1, least significant digit first ==")
odo = builtin_action("odometer")
x = canonical_point("", "0")                     # the integer 0
for step in range(5):
    print(f"t^{step}(0) = {x.label()}")
    x = apply_word(odo, ["t"], x)
print("t(-1) =", apply_word(odo, ["t"], canonical_point("", "1")).label(),
      " (-1 + 1 = 0)")

print()
print("== Grigorchuk generators are involutions with b c d = 1 ==")
grig = builtin_action("grigorchuk")
rng = random.Random(0)
pts = random_points(rng, 200)
for word in ("aa", "bb", "cc", "dd", "bcd"):
    ok = all(apply_word(grig, list(word), p) == p for p in pts)
    print(f"  {word} acts as identity on 200 random points: {ok}")

print()
print("== fragmenting a dihedral generator into two pieces ==")
dih = builtin_action("dihedral")
frag = fragment_generators(
    dih, "b", [[("0", True), ("1", False)], [("0", False), ("1", True)]])
ok = all(apply_word(frag, ["h1", "h2"], p) == apply_word(dih, ["b"], p)
         for p in pts)
print("  h1 h2 agrees with b on 200 random points:", ok)
print("  (each h_i acts by b on its cylinder and trivially elsewhere)")

print()
print("== the fragmented dihedral action: fragment both generators ==")
A = fragment_generators(
    dih, "a", [[("00", True), ("10", True), ("01", False), ("11", False)],
               [("00", False), ("10", False), ("01", True), ("11", True)]],
    prefix="ha")
AB = combine_actions("dihedral_frag", A, frag)
print("  generators:", AB.gen_names)
ok = all(apply_word(AB, ["ha1", "ha2"], p) == apply_word(dih, ["a"], p)
         for p in pts)
print("  ha1 ha2 recovers a pointwise:", ok)
