"""Pure-Python countermodel search kernel (fallback for ``_search.pyx``).

The formula arrives as flat node arrays in post-order (operands first):
``kinds[i]`` is one of VAR, BOT, IMP, RHD; for VAR nodes ``lhs[i]`` is the
variable index.  Worlds are bits of an int.

A model over ``n`` worlds is a valuation plus, for every program ``w`` and
input ``u``, an output set ``S(w, u)``.  The search guesses the truth set of
every ``|>``-node, evaluates the rest propositionally, and then checks per
program that some choice of output sets yields exactly the guessed truth
values.  Programs choose their output sets independently, so this covers every
model exactly once up to the guessed truth sets.  Valuations are enumerated
with world labels sorted by their variable vectors (worlds are interchangeable).
"""

from itertools import combinations_with_replacement

VAR, BOT, IMP, RHD = 0, 1, 2, 3
MAXN, MAXNODES, MAXK = 8, 256, 12  # same limits as the compiled kernel


def output_sets(n, det):
    if det:
        return [1 << v for v in range(n)]
    return list(range(1, 1 << n))


def violations(pairs, n, det, universal):
    """For each input ``u``: the set of ``|>``-atom bitsets that some
    nonempty output set of ``u`` falsifies, ``0`` (empty output) included."""
    sets = output_sets(n, det)
    opts = []
    for u in range(n):
        bit = 1 << u
        ou = {0}
        for S in sets:
            v = 0
            for t, (pm, qm) in enumerate(pairs):
                if pm & bit and ((S & ~qm) if universal else not (S & qm)):
                    v |= 1 << t
            ou.add(v)
        opts.append(ou)
    return opts


def realizable(opts, F):
    """Can one option per input be chosen so that their union is ``F``?"""
    reach = {0}
    for ou in opts:
        usable = [o for o in ou if not o & ~F]
        reach = {r | o for r in reach for o in usable}
    return F in reach


def node_masks(kinds, lhs, rhs, varmask, atom_masks, full):
    m = [0] * len(kinds)
    t = 0
    for i, k in enumerate(kinds):
        if k == VAR:
            m[i] = varmask[lhs[i]]
        elif k == IMP:
            m[i] = (~m[lhs[i]] | m[rhs[i]]) & full
        elif k == RHD:
            m[i] = atom_masks[t]
            t += 1
    return m


def search(kinds, lhs, rhs, root, nvars, n, det, universal):
    """Return ``(vectors, guess)`` for the first countermodel found, else None.

    ``vectors[w]`` is the variable bit-vector of world ``w``; bits
    ``t*n .. t*n+n-1`` of ``guess`` are the truth set of the ``t``-th ``|>``-node.
    """
    if n > MAXN or len(kinds) > MAXNODES:
        raise ValueError("formula or world bound too large for the search kernel")
    full = (1 << n) - 1
    rhd_nodes = [i for i, k in enumerate(kinds) if k == RHD]
    k = len(rhd_nodes)
    if k > MAXK:
        raise ValueError("too many |>-subformulas for the search kernel")
    if nvars > 16:
        raise ValueError("too many variables for the search kernel")
    if n * k >= 62:
        raise ValueError("guess space too large")
    for vecs in combinations_with_replacement(range(1 << nvars), n):
        varmask = [0] * nvars
        for w, vec in enumerate(vecs):
            for j in range(nvars):
                if (vec >> j) & 1:
                    varmask[j] |= 1 << w
        for guess in range(1 << (n * k)):
            atom_masks = [(guess >> (t * n)) & full for t in range(k)]
            m = node_masks(kinds, lhs, rhs, varmask, atom_masks, full)
            if m[root] == full:
                continue
            pairs = [(m[lhs[a]], m[rhs[a]]) for a in rhd_nodes]
            opts = violations(pairs, n, det, universal)
            ok = True
            for w in range(n):
                F = 0
                for t in range(k):
                    if not (atom_masks[t] >> w) & 1:
                        F |= 1 << t
                if not realizable(opts, F):
                    ok = False
                    break
            if ok:
                return list(vecs), guess
    return None
