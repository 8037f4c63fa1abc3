"""Forward proof builder and the shipped theorem corpus.

Each builder computes the conclusion from its premises, so corpus entries
are correct by construction and then re-checked by `check_proof`.
Run `python3 -m linimp.corpus DIR` to regenerate the `.proof` files.
"""

from __future__ import annotations

import sys
from pathlib import Path

from .sequent import (
    Atom, Bot, Formula, Lolli, OfCourse, Par, Proof, Sequent, Tensor, neg, parse_formula, print_proof,
)


def _remove(ctx: tuple[Formula, ...], f: Formula) -> tuple[Formula, ...]:
    i = ctx.index(f)
    return ctx[:i] + ctx[i + 1:]


def ax(f: Formula | str) -> Proof:
    f = parse_formula(f) if isinstance(f, str) else f
    return Proof("ax", Sequent((f,), f))


def lolli_r(p: Proof, a: Formula | str) -> Proof:
    a = parse_formula(a) if isinstance(a, str) else a
    s = p.sequent
    return Proof("lolliR", Sequent(_remove(s.ctx, a), Lolli(a, s.concl)), (p,))


def lolli_r_all(p: Proof) -> Proof:
    """Discharge the whole context, last formula innermost."""
    for f in reversed(p.sequent.ctx):
        p = lolli_r(p, f)
    return p


def lolli_l(p1: Proof, p2: Proof, b: Formula | None = None) -> Proof:
    a = p1.sequent.concl
    b = b if b is not None else p2.sequent.ctx[0]
    ctx = p1.sequent.ctx + _remove(p2.sequent.ctx, b) + (Lolli(a, b),)
    return Proof("lolliL", Sequent(ctx, p2.sequent.concl), (p1, p2))


def tensor_r(p1: Proof, p2: Proof) -> Proof:
    return Proof("tensorR", Sequent(p1.sequent.ctx + p2.sequent.ctx, Tensor(p1.sequent.concl, p2.sequent.concl)), (p1, p2))


def tensor_l(p: Proof, a: Formula | str, b: Formula | str) -> Proof:
    a = parse_formula(a) if isinstance(a, str) else a
    b = parse_formula(b) if isinstance(b, str) else b
    ctx = _remove(_remove(p.sequent.ctx, a), b) + (Tensor(a, b),)
    return Proof("tensorL", Sequent(ctx, p.sequent.concl), (p,))


def cut(p1: Proof, p2: Proof) -> Proof:
    a = p1.sequent.concl
    return Proof("cut", Sequent(p1.sequent.ctx + _remove(p2.sequent.ctx, a), p2.sequent.concl), (p1, p2))


def weaken(p: Proof, a: Formula | str) -> Proof:
    a = parse_formula(a) if isinstance(a, str) else a
    return Proof("!wL", Sequent(p.sequent.ctx + (OfCourse(a),), p.sequent.concl), (p,))


def contract(p: Proof, a: Formula | str) -> Proof:
    a = parse_formula(a) if isinstance(a, str) else a
    bang = OfCourse(a)
    ctx = _remove(_remove(p.sequent.ctx, bang), bang) + (bang,)
    return Proof("!cL", Sequent(ctx, p.sequent.concl), (p,))


def derelict(p: Proof, a: Formula | str) -> Proof:
    a = parse_formula(a) if isinstance(a, str) else a
    return Proof("!dL", Sequent(_remove(p.sequent.ctx, a) + (OfCourse(a),), p.sequent.concl), (p,))


def promote(p: Proof) -> Proof:
    return Proof("!R", Sequent(p.sequent.ctx, OfCourse(p.sequent.concl)), (p,))


def mp(fun: Formula | str, arg: Proof, rest: Proof) -> Proof:
    """Use `fun` (an implication) on the conclusion of arg, continue with rest."""
    fun = parse_formula(fun) if isinstance(fun, str) else fun
    return lolli_l(arg, rest, fun.right)


def _f(text: str) -> Formula:
    return parse_formula(text)


def _imll() -> dict[str, Proof]:
    A, B, C, D = (Atom(x) for x in "ABCD")
    out: dict[str, Proof] = {}
    out["identity"] = lolli_r(ax(A), A)
    out["tensor-comm"] = lolli_r(tensor_l(tensor_r(ax(B), ax(A)), A, B), "A * B")
    inner = tensor_r(ax(A), tensor_r(ax(B), ax(C)))
    out["tensor-assoc-right"] = lolli_r(tensor_l(tensor_l(inner, A, B), "A * B", C), "(A * B) * C")
    inner = tensor_r(tensor_r(ax(A), ax(B)), ax(C))
    out["tensor-assoc-left"] = lolli_r(tensor_l(tensor_l(inner, B, C), A, "B * C"), "A * (B * C)")
    # curry: (A*B -o C) -o A -o B -o C
    core = lolli_l(tensor_r(ax(A), ax(B)), ax(C))
    out["curry"] = lolli_r(lolli_r(lolli_r(core, B), A), "A * B -o C")
    # uncurry: (A -o B -o C) -o A * B -o C
    core = lolli_l(ax(A), lolli_l(ax(B), ax(C)), _f("B -o C"))
    out["uncurry"] = lolli_r(lolli_r(tensor_l(core, A, B), "A * B"), "A -o B -o C")
    # (A -o B) -o (B -o C) -o A -o C
    core = lolli_l(lolli_l(ax(A), ax(B)), ax(C))
    out["compose-forward"] = lolli_r(lolli_r(lolli_r(core, A), "B -o C"), "A -o B")
    out["compose"] = lolli_r(lolli_r(lolli_r(core, A), "A -o B"), "B -o C")
    # (A -o B -o C) -o B -o A -o C
    core = lolli_l(ax(A), lolli_l(ax(B), ax(C)), _f("B -o C"))
    out["exchange"] = lolli_r(lolli_r(lolli_r(core, A), B), "A -o B -o C")
    # A -o (A -o B) -o B
    out["apply"] = lolli_r(lolli_r(lolli_l(ax(A), ax(B)), "A -o B"), A)
    out["modus-ponens"] = lolli_r(tensor_l(lolli_l(ax(A), ax(B)), "A -o B", A), "(A -o B) * A")
    out["pairing"] = lolli_r(lolli_r(tensor_r(ax(A), ax(B)), B), A)
    # (A -o B) * (C -o D) -o A * C -o B * D
    core = tensor_r(lolli_l(ax(A), ax(B)), lolli_l(ax(C), ax(D)))
    core = tensor_l(tensor_l(core, A, C), "A -o B", "C -o D")
    out["tensor-functor"] = lolli_r(lolli_r(core, "A * C"), "(A -o B) * (C -o D)")
    # (A -o B) -o A * C -o B * C
    core = tensor_l(tensor_r(lolli_l(ax(A), ax(B)), ax(C)), A, C)
    out["tensor-map-left"] = lolli_r(lolli_r(core, "A * C"), "A -o B")
    # (A -o B) * (B -o C) -o A -o C
    core = lolli_l(lolli_l(ax(A), ax(B)), ax(C))
    out["transitivity"] = lolli_r(lolli_r(tensor_l(core, "A -o B", "B -o C"), A), "(A -o B) * (B -o C)")
    # (A * B) * C -o (C * B) * A
    core = tensor_r(tensor_r(ax(C), ax(B)), ax(A))
    out["tensor-reverse"] = lolli_r(tensor_l(tensor_l(core, A, B), "A * B", C), "(A * B) * C")
    out["identity-compound"] = lolli_r(ax("(A -o B) -o C"), "(A -o B) -o C")
    # (A -o B) -o ((A -o B) -o C) -o C
    out["apply-compound"] = lolli_r(lolli_r(lolli_l(ax("A -o B"), ax(C)), "(A -o B) -o C"), "A -o B")
    # A -o ~~A
    out["double-negation"] = lolli_r(lolli_r(lolli_l(ax(A), ax(Bot())), neg(A)), A)
    out["negation-elim"] = lolli_r(tensor_l(lolli_l(ax(A), ax(Bot())), neg(A), A), "~A * A")
    # (A -o B) -o ~B -o ~A
    core = lolli_l(lolli_l(ax(A), ax(B)), ax(Bot()))
    out["contraposition"] = lolli_r(lolli_r(lolli_r(core, A), "~B"), "A -o B")
    # ~~~A -o ~A
    core = lolli_l(lolli_r(lolli_l(ax(A), ax(Bot())), neg(A)), ax(Bot()))
    out["triple-negation"] = lolli_r(lolli_r(core, A), "~~~A")
    one = lolli_r(ax(Bot()), Bot())
    out["one"] = one
    out["one-right-unit"] = lolli_r(tensor_r(ax(A), one), A)
    # A * B -o (A -o B -o C) -o C
    core = lolli_l(ax(A), lolli_l(ax(B), ax(C)), _f("B -o C"))
    out["tensor-cps"] = lolli_r(lolli_r(tensor_l(core, A, B), "A -o B -o C"), "A * B")
    # (A * B -o C) -o B * A -o C
    core = tensor_l(lolli_l(tensor_r(ax(A), ax(B)), ax(C)), B, A)
    out["swap-argument"] = lolli_r(lolli_r(core, "B * A"), "A * B -o C")
    # (A -o B -o C -o D) -o C -o B -o A -o D
    core = lolli_l(ax(C), ax(D))
    core = lolli_l(ax(B), core, _f("C -o D"))
    core = lolli_l(ax(A), core, _f("B -o C -o D"))
    out["reverse-arguments"] = lolli_r(lolli_r(lolli_r(lolli_r(core, A), B), C), "A -o B -o C -o D")
    # (A -o B) * C -o A -o B * C
    core = tensor_r(lolli_l(ax(A), ax(B)), ax(C))
    out["strength"] = lolli_r(lolli_r(tensor_l(core, "A -o B", C), A), "(A -o B) * C")
    # A * (B -o C) -o B -o A * C
    core = tensor_r(ax(A), lolli_l(ax(B), ax(C)))
    out["costrength"] = lolli_r(lolli_r(tensor_l(core, A, "B -o C"), B), "A * (B -o C)")
    # ((A -o A) -o B) -o B
    out["apply-identity"] = lolli_r(lolli_l(lolli_r(ax(A), A), ax(B)), "(A -o A) -o B")
    # A -o B -o (A * B -o C) -o C
    core = lolli_l(tensor_r(ax(A), ax(B)), ax(C))
    out["pair-apply"] = lolli_r(lolli_r(lolli_r(core, "A * B -o C"), B), A)
    # cut of two tensor swaps: A * B -o A * B
    swap_ab = tensor_l(tensor_r(ax(B), ax(A)), A, B)  # A*B |- B*A
    swap_ba = tensor_l(tensor_r(ax(A), ax(B)), B, A)  # B*A |- A*B
    out["cut-double-swap"] = lolli_r(cut(swap_ab, swap_ba), "A * B")
    # (A -o B) -o (B -o C) -o (C -o D) -o A -o D, through two cuts
    ab = lolli_l(ax(A), ax(B))  # A, A-o B |- B
    bc = lolli_l(ax(B), ax(C))  # B, B-o C |- C
    cd = lolli_l(ax(C), ax(D))  # C, C-o D |- D
    chain = cut(cut(ab, bc), cd)  # A, A-oB, B-oC, C-oD |- D
    out["cut-chain"] = lolli_r(lolli_r(lolli_r(lolli_r(chain, A), "C -o D"), "B -o C"), "A -o B")
    # (A * B) * (C * D) -o (A * C) * (B * D)
    core = tensor_r(tensor_r(ax(A), ax(C)), tensor_r(ax(B), ax(D)))
    core = tensor_l(tensor_l(tensor_l(core, C, D), A, B), "A * B", "C * D")
    out["medial"] = lolli_r(core, "(A * B) * (C * D)")
    out["par-identity"] = lolli_r(ax(Par(A, B)), Par(A, B))
    return out


def _imell() -> dict[str, Proof]:
    A, B, C = (Atom(x) for x in "ABC")
    bA, bB = OfCourse(A), OfCourse(B)
    out: dict[str, Proof] = {}
    out["dereliction"] = lolli_r(derelict(ax(A), A), bA)
    out["digging"] = lolli_r(promote(ax(bA)), bA)
    # !(A -o B) -o !A -o !B
    core = derelict(derelict(lolli_l(ax(A), ax(B)), A), "A -o B")
    out["bang-functor"] = lolli_r(lolli_r(promote(core), bA), "!(A -o B)")
    out["bang-duplicate"] = lolli_r(contract(tensor_r(ax(bA), ax(bA)), A), bA)
    out["weakening"] = lolli_r(lolli_r(weaken(ax(B), A), B), bA)
    out["bang-to-one"] = lolli_r(weaken(lolli_r(ax(Bot()), Bot()), A), bA)
    # !A * !B -o !(A * B)
    core = derelict(derelict(tensor_r(ax(A), ax(B)), A), B)
    out["bang-tensor"] = lolli_r(tensor_l(promote(core), bA, bB), "!A * !B")
    # !A -o !A * A
    core = contract(tensor_r(ax(bA), derelict(ax(A), A)), A)
    out["bang-split"] = lolli_r(core, bA)
    out["double-dereliction"] = lolli_r(derelict(ax(bA), bA), "!!A")
    out["bang-identity"] = lolli_r(ax(bA), bA)
    out["bang-apply"] = lolli_r(lolli_r(lolli_l(ax(bA), ax(B)), bA), "!A -o B")
    # !A -o (!A -o !A -o B) -o B
    core = lolli_l(ax(bA), lolli_l(ax(bA), ax(B)), _f("!A -o B"))
    out["bang-contract-use"] = lolli_r(lolli_r(contract(core, A), "!A -o !A -o B"), bA)
    # !(A -o B) -o !(B -o C) -o !(A -o C)
    core = lolli_r(lolli_l(lolli_l(ax(A), ax(B)), ax(C)), A)  # A-oB, B-oC |- A-oC
    core = derelict(derelict(core, "A -o B"), "B -o C")
    out["bang-compose"] = lolli_r(lolli_r(promote(core), "!(B -o C)"), "!(A -o B)")
    out["bang-tensor-comm"] = lolli_r(tensor_l(tensor_r(ax(bB), ax(bA)), bA, bB), "!A * !B")
    out["promote-identity"] = promote(lolli_r(ax(A), A))
    out["bang-tensor-drop"] = lolli_r(tensor_l(weaken(ax(B), A), bA, B), "!A * B")
    return out


def build_corpus() -> dict[str, Proof]:
    return {**_imll(), **_imell()}


def write_corpus(directory: str | Path) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    written = []
    for name, p in build_corpus().items():
        path = d / f"{name}.proof"
        path.write_text(f"; {p.sequent}\n{print_proof(p)}\n")
        written.append(path)
    return written


if __name__ == "__main__":
    for path in write_corpus(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent / "data" / "proofs"):
        print(path)
