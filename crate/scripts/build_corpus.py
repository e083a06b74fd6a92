#!/usr/bin/env python3
"""Builds the bundled field corpus under data/corpus/.

Every record is computed with PARI/GP (through cypari2): defining polynomial,
signed discriminant, signature, integral basis, torsion, fundamental units
(certified with bnfcertify), subfield lattice and relative unit bases.
Fundamental units of real quadratic fields come from a continued-fraction
expansion of the ring generator and are cross-checked against PARI's
regulator.

Usage: python3 scripts/build_corpus.py [outdir]
"""
import json
import math
import os
import sys
from fractions import Fraction

import cypari2

pari = cypari2.Pari()
pari.allocatemem(4 * 10**8, silent=True)

BUILD_DATE = "2026-10-16"
ORACLE = "PARI/GP %s via cypari2" % ".".join(str(v) for v in pari("version()")[:3])

REAL_QUADRATIC_M = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30, 31, 33]
IMAG_QUADRATIC_M = [-1, -2, -3, -5, -7]
HIGHER = [
    "x^3 + x^2 - 2*x - 1",
    "x^3 - 3*x + 1",
    "x^3 - 2",
    "x^3 - x - 1",
    "x^4 - 10*x^2 + 1",
    "x^4 + x^3 + x^2 + x + 1",
    "x^4 + 1",
    "x^4 - x^3 - 3*x^2 + x + 1",
    "x^4 - 2",
    "x^5 - x^3 - x^2 + x + 1",
    "x^6 - x^5 + 2*x^4 - 2*x^3 + 2*x^2 - 2*x + 1",
    "x^6 + x^5 + x^4 + x^3 + x^2 + x + 1",
]
# (top label, base label); "Q" is the rationals.
EXTENSIONS = [
    ("x2-2", "Q"),
    ("x2-3", "Q"),
    ("x2-x-1", "Q"),
    ("x2-6", "Q"),
    ("x2-7", "Q"),
    ("x3+x2-2x-1", "Q"),
    ("x4-10x2+1", "x2-2"),
    ("x4-10x2+1", "x2-3"),
    ("x4-10x2+1", "x2-6"),
    ("x4-x3-3x2+x+1", "x2-x-1"),
    ("x4-2", "x2-2"),
]

member = {name: pari("(b)->b.%s" % name) for name in ["disc", "sign", "zk", "tu", "fu", "reg", "nf"]}


def label_of(pol):
    """x^4 - 10*x^2 + 1 -> x4-10x2+1"""
    return str(pol).replace(" ", "").replace("^", "").replace("*", "")


def coeffs_of(pol):
    d = int(pari.poldegree(pol))
    return [int(pari.polcoef(pol, i)) for i in range(d + 1)]


def frac_str(q):
    q = Fraction(int(pari.numerator(q)), int(pari.denominator(q)))
    return str(q.numerator) if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)


def coords_of(elt, d):
    """Power-basis coordinates of a polmod or polynomial as rational strings."""
    p = pari.lift(elt)
    return [frac_str(pari.polcoef(p, i)) for i in range(d)]


def quadratic_unit_cf(m):
    """Fundamental unit of Q(sqrt m) as (a, b) meaning a + b*omega.

    omega = sqrt(m) for m = 2, 3 mod 4 and (1 + sqrt m)/2 for m = 1 mod 4.
    Runs the continued fraction of omega = (P + sqrt(N))/Q and returns the
    first convergent p/q with p - q*conj(omega) of norm +-1.
    """
    one_mod_four = m % 4 == 1
    if one_mod_four:
        # (1 + sqrt m)/2 = (2 + sqrt(4m))/4
        N, P, Q = 4 * m, 2, 4
    else:
        N, P, Q = m, 0, 1
    s = math.isqrt(N)
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for _ in range(100000):
        a = (P + s) // Q
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if one_mod_four:
            a0, b0 = p_cur - q_cur, q_cur
            norm = a0 * a0 + a0 * b0 - b0 * b0 * ((m - 1) // 4)
        else:
            a0, b0 = p_cur, q_cur
            norm = a0 * a0 - m * b0 * b0
        if abs(norm) == 1:
            return a0, b0
        P = a * Q - P
        Q = (N - P * P) // Q
    raise RuntimeError("continued fraction did not reach a unit for m=%d" % m)


def quadratic_poly(m):
    if m % 4 == 1:
        return pari("x^2 - x - (%d)" % ((m - 1) // 4))
    return pari("x^2 - (%d)" % m)


def subfield_data(pol, label):
    """Proper subfields (including Q) and containment edges, with k's label on top."""
    nf = pari.nfinit(pol)
    d = int(pari.poldegree(pol))
    nodes = []  # (label, defining poly, generator as element of k)
    counts = {}
    for s in pari.nfsubfields(nf):
        g, h = s[0], s[1]
        dg = int(pari.poldegree(g))
        if dg == d:
            continue
        if dg == 1:
            nodes.append(["Q", pari("x"), pari.Mod(0, pol)])
            continue
        g = pari.polredabs(g)
        base = label_of(g)
        counts[base] = counts.get(base, 0) + 1
        nodes.append([base, g, pari.Mod(h, pol)])
    seen = {}
    for n in nodes:
        if counts.get(n[0], 0) > 1:
            seen[n[0]] = seen.get(n[0], 0) + 1
            n[0] = "%s.%d" % (n[0], seen[n[0]])
    nodes.sort(key=lambda t: (int(pari.poldegree(t[1])), t[0]))

    def span_matrix(hk, dg):
        entries = [[pari.polcoef(pari.lift(hk ** i), j) for j in range(d)] for i in range(dg)]
        return pari.matrix(d, dg, [entries[c][r] for r in range(d) for c in range(dg)])

    def contained(a, b):
        la, ga, ha = a
        lb, gb, hb = b
        da, db = int(pari.poldegree(ga)), int(pari.poldegree(gb))
        if la == lb or da == db or db % da != 0:
            return False
        if da == 1:
            return True
        mb = span_matrix(hb, db)
        va = pari.matrix(d, 1, [pari.polcoef(pari.lift(ha), j) for j in range(d)])
        return int(pari.matrank(pari.matconcat([mb, va]))) == db

    edges = []
    for a in nodes:
        for b in nodes:
            if contained(a, b):
                edges.append([a[0], b[0]])
        edges.append([a[0], label])
    out = []
    for (l, g, _) in nodes:
        if l == "Q":
            out.append({"label": "Q", "poly": [0, 1], "discriminant": 1, "signature": [1, 0]})
            continue
        dg = int(pari.poldegree(g))
        r1 = int(pari.polsturm(g))
        out.append({
            "label": l,
            "poly": coeffs_of(g),
            "discriminant": int(pari.nfdisc(g)),
            "signature": [r1, (dg - r1) // 2],
        })
    return out, edges


def field_record(pol, quadratic_m=None):
    d = int(pari.poldegree(pol))
    label = label_of(pol)
    bnf = pari.bnfinit(pol, 1)
    assert int(pari.bnfcertify(bnf)) == 1, label
    sig = member["sign"](bnf)
    zk = member["zk"](bnf)
    reg = member["reg"](bnf)
    provenance = {
        "oracle": ORACLE,
        "date": BUILD_DATE,
        "method": "bnfinit(pol, 1) + bnfcertify; integral basis from nf.zk; nfsubfields",
    }
    units = [coords_of(u, d) for u in member["fu"](bnf)]
    if quadratic_m is not None and quadratic_m > 0:
        a, b = quadratic_unit_cf(quadratic_m)
        units = [[str(a), str(b)]]
        cf_reg = abs(float(pari("log(abs(%d + %d*polroots(%s)[1]))" % (a, b, pol))))
        assert abs(cf_reg - float(reg)) < 1e-9 * max(1.0, cf_reg), (label, cf_reg, reg)
        provenance["fundamental_units"] = (
            "continued fraction of the ring generator; regulator cross-checked against bnfinit"
        )
    subfields, edges = subfield_data(pol, label)
    rec = {
        "label": label,
        "poly": coeffs_of(pol),
        "discriminant": int(member["disc"](bnf)),
        "signature": [int(sig[0]), int(sig[1])],
        "integral_basis": [coords_of(zk[j], d) for j in range(d)],
        "torsion_order": int(member["tu"](bnf)[0]),
        "fundamental_units": units,
        "regulator_hint": str(pari('(r)->Strprintf("%.25g", r)')(reg)),
        "subfields": subfields,
        "lattice_edges": edges,
        "provenance": provenance,
    }
    return rec, bnf


def relative_norm(u, top_pol, base_pol, emb):
    """Norm of u (a polmod of the top field) down to the base, as a base polmod."""
    nfb = pari.nfinit(pari.subst(base_pol, "x", "t"))
    fac = pari.nffactor(nfb, pari.subst(top_pol, "x", "y"))
    theta = pari.Mod(pari("x"), top_pol)
    image = pari.Mod(emb, top_pol)
    for i in range(int(pari.matsize(fac)[0])):
        rel = pari.lift(fac[i, 0])
        val = pari.substvec(rel, ["t", "y"], [image, theta])
        if val == 0:
            upoly = pari.subst(pari.lift(u), "x", "y")
            n = pari.lift(pari.Mod(pari.polresultant(rel, upoly, "y"), pari.subst(base_pol, "x", "t")))
            return pari.Mod(pari.subst(n, "t", "x"), base_pol)
    raise RuntimeError("no relative factor compatible with the embedding")


def relative_units(top_bnf, top_pol, base_pol, base_bnf):
    """(embedding matrix, Z-basis of relative units) for top over base."""
    d_top = int(pari.poldegree(top_pol))
    d_base = int(pari.poldegree(base_pol))
    emb = pari.lift(pari.nfisincl(base_pol, top_pol)[0])
    cols = [coords_of(pari.Mod(emb, top_pol) ** j, d_top) for j in range(d_base)]
    matrix = [[cols[j][i] for j in range(d_base)] for i in range(d_top)]
    fu = member["fu"](top_bnf)
    rows = []
    for u in fu:
        n = relative_norm(u, top_pol, base_pol, emb)
        ex = pari.bnfisunit(base_bnf, n)
        rows.append([int(ex[i]) for i in range(len(ex) - 1)])
    r_top, r_base = len(fu), len(rows[0])
    A = pari.matrix(r_top, r_base, [rows[i][j] for i in range(r_top) for j in range(r_base)])
    K = pari.matkerint(pari.mattranspose(A))
    rel = []
    for c in range(int(pari.matsize(K)[1])):
        e = pari.Mod(1, top_pol)
        for i in range(r_top):
            e = e * fu[i] ** int(K[i, c])
        rel.append(coords_of(e, d_top))
    return matrix, rel


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "data", "corpus")
    os.makedirs(out, exist_ok=True)
    records, bnfs = {}, {}
    for m in REAL_QUADRATIC_M + IMAG_QUADRATIC_M:
        pol = quadratic_poly(m)
        rec, bnf = field_record(pol, quadratic_m=m)
        records[rec["label"]] = rec
        bnfs[rec["label"]] = (bnf, pol)
    for p in HIGHER:
        pol = pari(p)
        rec, bnf = field_record(pol)
        records[rec["label"]] = rec
        bnfs[rec["label"]] = (bnf, pol)
    for top, base in EXTENSIONS:
        rec = records[top]
        top_bnf, top_pol = bnfs[top]
        if base == "Q":
            d_top = len(rec["poly"]) - 1
            matrix = [["1"]] + [["0"] for _ in range(d_top - 1)]
            rel = rec["fundamental_units"]
        else:
            base_bnf, base_pol = bnfs[base]
            matrix, rel = relative_units(top_bnf, top_pol, base_pol, base_bnf)
        rec.setdefault("extensions", []).append({
            "base_label": base,
            "embedding_matrix": matrix,
            "relative_units": rel,
        })
    for label, rec in sorted(records.items()):
        with open(os.path.join(out, label + ".json"), "w") as f:
            json.dump(rec, f, indent=1)
            f.write("\n")
        print(label, rec["discriminant"], rec["signature"], rec["regulator_hint"],
              len(rec["subfields"]), len(rec.get("extensions", [])))
    print("wrote %d records to %s" % (len(records), out))


if __name__ == "__main__":
    main()
