"""
Truth tables with choices
=========================

A logic here is a set of truth tables whose cells hold sets of values.
A valuation may pick any member of the cell, so one formula can take
different values under the same atom assignment.
"""
from importlib import resources

from nmcalc.syntax import parse_logic, parse_sequent
from nmcalc.semantics import entails, legal_valuations
from nmcalc.core import subformula_closure

# circ2 ships with the package: circ(1) may be 1 or 2, circ(2) must be 2
text = (resources.files("nmcalc") / "fixtures" / "circ2.mvl").read_text()
print(text)
logic = parse_logic(text)

# %%
# Legal valuations of p and circ(p): three of the four raw assignments survive
goal = parse_sequent("p:2 |- circ(p):1", logic)
closure = subformula_closure(goal.formulas())
for v in legal_valuations(logic, closure):
    print(dict((str(f), k) for f, k in v.as_dict().items()))

# %%
# Entailment is decided by brute force; a failure comes with the first countermodel
print(entails(logic, (), parse_sequent("circ(p):1 |- p:1", logic)))
verdict = entails(logic, (), goal)
print("countermodel:")
print(verdict.countermodel.render())

# %%
# Hypotheses restrict the valuations that count
hyp = parse_sequent("|- p:2", logic)
print(entails(logic, [hyp], parse_sequent("|- circ(p):2", logic)))
