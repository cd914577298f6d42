"""
One logic, six calculi
======================

Every calculus is generated from the same tables. The prover asks the
semantic oracle first and then builds a proof the checker accepts.
"""
from importlib import resources

from nmcalc.calculi import CalculusId, rule_schemas
from nmcalc.proof import check_proof, prove
from nmcalc.syntax import parse_logic, parse_sequent, render_proof

logic = parse_logic((resources.files("nmcalc") / "fixtures" / "circ2.mvl").read_text())

# %%
# The table-derived part of each calculus
for calc in CalculusId:
    names = sorted({s.rule.value for s in rule_schemas(calc, logic)})
    print(f"{calc.value:6} {', '.join(names)}")

# %%
# A table axiom of the axiomatic calculus, as a schema
for schema in rule_schemas(CalculusId.A, logic):
    if schema.rule.value == "table_ax":
        print(schema.render())
        break

# %%
goal = parse_sequent("circ(p):1 |- p:1", logic)
for calc in CalculusId:
    proof = prove(logic, calc, goal).proof
    check_proof(logic, calc, proof)
    print(f"\n{calc.value}: {proof.size()} nodes")
    print(render_proof(proof))

# %%
# With hypotheses the search splits on the values of subformulas
hyps = [parse_sequent("|- p:2", logic)]
out = prove(logic, CalculusId.R, parse_sequent("|- circ(p):2", logic), hyps)
print(render_proof(out.proof))
