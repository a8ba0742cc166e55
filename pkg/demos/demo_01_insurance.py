"""A guided tour of the travel-insurance example, end to end.

A traveller picks a trip of some danger level, may or may not buy insurance
(30 CHF), and pays 1000 CHF if an accident happens. The causal space has one
kernel: what the world looks like if we *make* the traveller buy, or skip,
the insurance. Every number below is an exact rational.

Run:  python demos/demo_01_insurance.py
"""

from pathlib import Path

from causalspaces import (
    F1,
    F2,
    InterventionSpec,
    MEAN_AND_VARIANCE_DIFF,
    active_effect,
    conditional_active_effect_event,
    intervention_measure,
    max_effect_score_event,
    mean_effect_score_algebra,
    mean_effect_score_event,
)
from causalspaces.document import load_document, to_causal_space

doc = load_document(Path(__file__).resolve().parent.parent / "fixtures" / "insurance.json")
cs = to_causal_space(doc)
sp = cs.space
P = cs.observational

pays_big = doc.events["pays1000"]
print("The observational world")
print(f"  P(pay = 1000) = {P(pays_big)}  (= {float(P(pays_big))})")
print(f"  P(pay = 30)   = {P(sp.where(pay='30'))}")
print(f"  P(pay = 0)    = {P(sp.where(pay='0'))}")

print("\nForcing the insurance decision (the two kernel rows)")
do_buy = InterventionSpec.point(sp, {"ins": "Y"})
do_skip = InterventionSpec.point(sp, {"ins": "N"})
p_buy = intervention_measure(cs, do_buy)
p_skip = intervention_measure(cs, do_skip)
print(f"  P^do(buy) (pay = 1000) = {p_buy(pays_big)}")
print(f"  P^do(skip)(pay = 1000) = {p_skip(pays_big)}")

omega = ("L", "Y", "30")  # any outcome with ins=Y selects the 'buy' row
print("\nDoes the insurance decision move the 1000-CHF event at all?")
print(f"  buying:   active effect = {active_effect(cs, {'ins'}, omega, pays_big)}")
print(f"  skipping: active effect = {active_effect(cs, {'ins'}, ('L', 'N', '0'), pays_big)}")

print("\nConditional story: the effect lives entirely in the dangerous trips")
for name in ("no_danger", "high_danger"):
    verdict = conditional_active_effect_event(cs, {"ins"}, omega, pays_big, doc.events[name])
    print(f"  given {name:<11} -> {verdict}")

print("\nScores: direction and size of the shift on P(pay = 1000)")
for label, spec in (("buy", do_buy), ("skip", do_skip)):
    linear = mean_effect_score_event(cs, {"ins"}, spec.q, pays_big, F1).value
    curved = mean_effect_score_event(cs, {"ins"}, spec.q, pays_big, F2).value
    print(f"  {label:<4}  linear {str(linear):>7}   sinh-weighted {curved:+.6f}")

best = max_effect_score_event(cs, {"ins"}, sp.all_event(), pays_big, F1)
print(f"  largest shift comes from ins={best.argmax[1]}: {best.value} (tied: {best.tied})")

print("\nDistribution-level score on the payment algebra (buying insurance)")
score = mean_effect_score_algebra(
    cs, {"ins"}, do_buy.q, doc.partitions["by_pay"], MEAN_AND_VARIANCE_DIFF, doc.variables["payment"]
)
mean_shift, var_shift = score.value
print(f"  mean shift     = {mean_shift}  ({float(mean_shift)} CHF more on average)")
print(f"  variance shift = {var_shift}  (the 1000-CHF tail disappears)")
