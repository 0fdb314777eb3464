# Development scratch: verify core behavior against known values before freezing tests.
import liftforge as lf
from liftforge.landscape import parse_landscape, compile_landscape, is_conserved, enumerate_conserved, check_shift_product, compile_set

# 1. rule_from_table basics
r_id = lf.rule_from_table(1, [0, 1])
print("identity:", r_id, "shift", r_id.shift)
r_x2 = lf.rule_from_table(3, [0, 0, 1, 1, 0, 0, 1, 1])  # g(x)=x2
print("x2 trimmed:", r_x2, "k", r_x2.k, "shift", r_x2.shift)

# 2. landscapes -> known ANF identities
patt = compile_landscape(parse_landscape("0★10"))
patt_ref = lf.rule_from_anf_text("x2 ^ (x1^1)*x3*(x4^1)")
print("patt:", patt.text(), "matches ANF:", patt.same_function(patt_ref), "degree", lf.degree(patt))

ho1 = compile_landscape(parse_landscape("1★01"))
ho1_ref = lf.rule_from_anf_text("x2 ^ x1*(x3^1)*x4")
print("1*01 matches:", ho1.same_function(ho1_ref))
print("1*01 anf monomials:", sorted(sorted(m) for m in lf.to_anf(ho1).monomials))

ho5 = compile_landscape(parse_landscape("11★01"))
print("11*01 matches:", ho5.same_function(lf.rule_from_anf_text("x3 ^ x1*x2*(x4^1)*x5")))
ho6 = compile_landscape(parse_landscape("10★10"))
print("10*10 matches:", ho6.same_function(lf.rule_from_anf_text("x3 ^ x1*(x2^1)*x4*(x5^1)")))

# 3. conserved checks
print("conserved 0★10:", is_conserved(parse_landscape("0★10")))
print("conserved 1★01:", is_conserved(parse_landscape("1★01")))
print("conserved 0★11:", is_conserved(parse_landscape("0★11")))

# 4. enumeration counts k=4..8
for k in range(4, 9):
    res = enumerate_conserved(k, include_list=False)
    print("enum", k, res.count, res.class_count)

# 5. induced maps / liftings
print("patt lifting 4..12:", all(lf.is_lifting(patt, n) for n in range(4, 13)))
xor2 = lf.rule_from_anf_text("x1 ^ x2")
print("xor2 lifting n=8:", lf.is_lifting(xor2, 8))

# 6. composition example: g=(1★001), f=(1★01) -> printed 5-var ANF
g = compile_landscape(parse_landscape("1★001"))
f = compile_landscape(parse_landscape("1★01"))
gf = lf.compose(g, f)
ref = lf.rule_from_anf_text("x2 ^ x1*(x4*(x3^1) ^ (x4^1)*x5*(x2^x3^1))")
print("composition example: k=", gf.k, "match:", gf.same_function(ref), "shift:", gf.shift)

# 7. decide_proper
print("patt proper:", lf.decide_proper(patt).decision)
v = lf.decide_proper(xor2)
print("xor2:", v.decision, "witness ok:", lf.replay_witness(xor2, v.witness), v.witness.to_json())

# 8. iterate order
print("patt order:", lf.iterate_order(patt, 4))
print("identity order:", lf.iterate_order(r_id, 4))

# 9. expand
p3 = lf.expand(patt, 3)
print("expand patt s=3: k =", p3.k)

# 10. canonicalize the 4 k=4 landscapes
ids = {lf.canonicalize(compile_landscape(parse_landscape(t))).text() for t in ["0★10", "1★01", "01★0", "10★1"]}
print("k4 orbit ids:", ids)

# 11. check_shift_product
print("shift-product j for 1★01:", check_shift_product(ho1))
print("shift-product for x1^x2:", check_shift_product(xor2))

# 12. Daemen set identity 1
s1 = compile_set([parse_landscape("0★110"), parse_landscape("10★10")])
c1 = lf.compose(compile_landscape(parse_landscape("0★110")), compile_landscape(parse_landscape("10★10")))
print("set identity 1:", s1.same_function(c1), "k =", s1.k, "shift set/comp:", s1.shift, c1.shift)

# 13. Daemen set identity 2
mem = [parse_landscape(t) for t in ["0★10", "0--★10", "0----★10"]]
s2 = compile_set(mem)
c2 = lf.compose_chain([compile_landscape(parse_landscape(t)) for t in ["0-1-1★10", "0-1★10", "0★10"]])
print("set identity 2:", s2.same_function(c2), "k =", s2.k, s2.shift, c2.shift)
