"""
Moving proofs between calculi
=============================

Table axioms and table rules are interchangeable: each rule becomes an
axiom plus cuts, each axiom becomes identity axioms plus a rule. Cuts and
resolutions can then be removed again.
"""
from importlib import resources

from nmcalc.calculi import CalculusId, RuleId
from nmcalc.proof import CutElimStats, count_rule_uses, eliminate_cuts, translate_A_to_R, translate_R_to_A
from nmcalc.syntax import parse_logic, parse_proof, render_proof

fixtures = resources.files("nmcalc") / "fixtures"
logic = parse_logic((fixtures / "circ2.mvl").read_text())

# %%
# A two-node proof with one table rule
table_r = parse_proof((fixtures / "circ_table_r.proof").read_text(), logic)
print(render_proof(table_r))

# %%
# ... becomes a table axiom and one cut
as_a = translate_R_to_A(logic, table_r)
print(render_proof(as_a))
print("cuts:", count_rule_uses(as_a, RuleId.CUT))

# %%
# and back again; the extra cut stays, the axiom turns into a rule
back = translate_A_to_R(logic, as_a)
print(render_proof(back))

# %%
# Cut elimination on the weakening example shrinks five nodes to one
cut5 = parse_proof((fixtures / "cut5.proof").read_text(), logic)
print(render_proof(cut5))
print("=>", render_proof(eliminate_cuts(logic, CalculusId.R, cut5)))

# %%
# A resolution of two identical table-rule proofs keeps one copy
res = parse_proof((fixtures / "res_equal.proof").read_text(), logic)
stats = CutElimStats()
print(render_proof(eliminate_cuts(logic, CalculusId.R, res, stats=stats)))
print(stats)
