"""No effect, active effect, dormant effect: the copy construction.

Two binary coordinates; observationally they always agree. Intervening on
the first coordinate copies it onto the second, so the diagonal event keeps
probability one: no *active* effect. But under a joint intervention the two
coordinates decouple, and the first one suddenly matters: the effect was
there all along, dormant.

Run:  python demos/demo_02_trichotomy.py
"""

from causalspaces import (
    EffectQuery,
    classify,
    gen_dormant_space,
    has_causal_effect,
    oracle_effect_brute,
    post_intervention_active_effect,
    run_query,
)

cs = gen_dormant_space()
sp = cs.space
diag = sp.event([("0", "0"), ("1", "1")])
omega = ("0", "1")

print("The copy space")
print(f"  outcomes: {list(sp.outcomes)}")
print(f"  P on the diagonal: {cs.observational(diag)}")
print(f"  kernel on c1 copies it onto c2; kernel on c2 redraws c1 from its marginal")

print("\nMarginal view: intervening on c1 cannot move the diagonal")
row = cs.kernel(frozenset({"c1"}))
print(f"  K_c1(0, diagonal) = {row.value(('0',), diag)} = P(diagonal)")

print("\nBut the effect is there, dormant:")
print(f"  has_causal_effect(c1, omega, diagonal) = {has_causal_effect(cs, {'c1'}, omega, diag)}")
print(f"  classify -> {classify(cs, {'c1'}, omega, diag)}")
print(f"  (the joint kernel at (0, 1) gives the diagonal 0, the c2 kernel gives it 1/2)")

print("\nA genuinely active effect, for contrast:")
print(f"  classify(c1, (0,0), {{c2 = 0}}) -> {classify(cs, {'c1'}, ('0', '0'), sp.where(c2='0'))}")

print("\nPost-intervention: once c2 is forced, c1 stops mattering for c2-events")
for a, label in ((sp.where(c2="0"), "{c2 = 0}"), (diag, "diagonal")):
    still = post_intervention_active_effect(cs, {"c1"}, {"c2"}, omega, a)
    print(f"  active effect on {label:<9} after intervening on c2: {still}")

print("\nThe brute-force oracle re-derives the dormant verdict by literal enumeration")
query = EffectQuery(frozenset({"c1"}), omega, diag)
print(f"  fast implementation: {run_query(cs, query)}")
print(f"  brute-force oracle:  {oracle_effect_brute(cs, query)}")
