# The hidden-state model: four definite-CP/definite-flavor states, a free
# function rho(t) boxed in by admissibility bounds, and the four joint
# probabilities P1..P4 it produces.
#
# Also shown: the validity boundary of the simplified conditional formulas.
# The flip fractions w2, w4 must grow for the conditionals to stay
# probabilities; once the oscillation outruns the decay envelope they turn
# over and the model leaves its domain.

import numpy as np

import mesonbell as mb

kaon = mb.KAON
g = kaon.gamma_s

print("hidden states:", ", ".join(f"{s.label}(CP={s.cp:+d},S={s.strangeness:+d})"
                                  for s in mb.HIDDEN_STATES))
print("initial configurations:", ", ".join(f"({l.label},{r.label})" for l, r in mb.INITIAL_PAIRS))

print("\nadmissible rho band (kaon), times in 1/gamma_s:")
print(f"  {'t':>4} {'lower':>11} {'upper':>11}")
for u in (0.0, 0.5, 1.0, 2.0, 4.0):
    lo, up = mb.rho_bounds(kaon, u / g)
    print(f"  {u:4.1f} {float(lo):11.5f} {float(up):11.5f}")

zero = mb.RhoProfile.zero()
sat = mb.RhoProfile.saturate_upper_short()

print("\nP1..P4 on the doubling ray, rho = 0:")
print(f"  {'t_a':>4} {'P1':>10} {'P2':>10} {'P3':>10} {'P4':>10} {'sum/4':>10} {'QM':>10}")
for u in (0.5, 1.0, 2.0, 3.0):
    t_a = u / g
    p = mb.joint_probabilities(kaon, zero, t_a, 2 * t_a)
    qm = mb.qm_like_joint(kaon, t_a, 2 * t_a)
    print(f"  {u:4.1f} " + " ".join(f"{v:10.6f}" for v in p)
          + f" {p.sum() / 4:10.6f} {qm:10.6f}")

print("\nsaturating rho = E_S Q- collapses everything onto P2:")
t_a = 1 / g
p = mb.joint_probabilities(kaon, sat, t_a, 2 * t_a)
print(f"  P = {p}   (P1 = P3 = P4 = 0 exactly)")

# profiles are rejected, never clamped, when they leave the admissible tube
try:
    mb.RhoProfile.saturate_lower_short().value(kaon, 1 / g)
except mb.InadmissibleRhoError as err:
    print(f"\nsaturate_lower_short at t = 1/gamma_s is rejected:\n  {err}")

# validity boundary: the conditional flip probability changes sign
print("\nconditional flip p43(t_b | t_a) with saturated rho, doubling ray:")
for u in (1.0, 2.0, 3.0, 4.0, 5.0):
    c = mb.p43_conditional(kaon, sat, u / g, 2 * u / g)
    marker = "" if c >= 0 else "   <- outside the validity domain"
    print(f"  t_a = {u:3.1f}/gamma_s   p43 = {c:+.6f}{marker}")
