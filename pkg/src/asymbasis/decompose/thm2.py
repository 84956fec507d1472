"""Every n >= h as a sum of h elements of A_g(W_0), by induction on n.

Each step subtracts a block of digits from n, decomposes the smaller
number, then folds the subtracted digits back into the parts so that
every part keeps its support inside W_0 = {f : f mod m <= m-t-1}. The
induction is unrolled into a loop: descend to a base case (or a memo
hit), then rebuild the parts on the way back up.

All scalars (k, i, u, v, s, q) come from exact integer comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from asymbasis.decompose.certificate import (
    DecompositionCertificate,
    DecompositionTrace,
    InvariantViolation,
    OutOfRangeError,
    require,
)
from asymbasis.gadic import ilog, is_member, power
from asymbasis.partition import Thm2Params


@dataclass
class _Step:
    n: int
    case: str
    child_n: int | None = None
    scalars: dict = field(default_factory=dict)
    subtracted: int | None = None
    checks: list = field(default_factory=list)
    repair: str | None = None
    values: dict = field(default_factory=dict)
    # data for rebuilding the parts from the child's parts
    extra: dict = field(default_factory=dict)


def _in_w0(x: int, p: Thm2Params) -> bool:
    m, t = p.m, p.t
    return is_member(x, lambda f: f % m < m - t, p.g)


def _plan(n: int, p: Thm2Params) -> _Step:
    """Scalars and the recursion target for one induction step at n."""
    g, h, m, t = p.g, p.h, p.m, p.t
    D = n - h
    if D == 0:
        return _Step(n, "base-h")
    if 1 <= D <= g * (g - 1):
        return _Step(n, "base-h+i", scalars={"i": D})

    st = _Step(n, "")
    chk = st.checks
    e = ilog(D // (g - 1), g)
    k, i = divmod(e, m)
    st.scalars.update(k=k, i=i)
    mk = m * k
    require(chk, "(g-1)*g^(m*k) <= n-h", (g - 1) * power(g, mk), "<=", D)
    require(chk, "n-h < (g-1)*g^(m*(k+1))", D, "<", (g - 1) * power(g, mk + m))
    require(chk, "(g-1)*g^(m*k+i) <= n-h", (g - 1) * power(g, e), "<=", D)
    require(chk, "n-h < (g-1)*g^(m*k+i+1)", D, "<", (g - 1) * power(g, e + 1))
    require(chk, "m*k+i >= 1", e, ">=", 1)

    if i <= m - t - 1:
        sub = (g - 1) * power(g, e)
        st.case = "1.1" if i <= m - t - 2 else "1.2"
        st.subtracted = sub
        st.child_n = n - sub
        require(chk, "h <= n-(g-1)*g^(m*k+i)", h, "<=", st.child_n)
        require(chk, "n-(g-1)*g^(m*k+i) < (g-1)^2*g^(m*k+i)+h", st.child_n, "<", (g - 1) ** 2 * power(g, e) + h)
        st.extra = {"e": e, "sub": sub}
        return st

    # Case 2: largest u with h(g-1)g^(mk+u) <= n-h
    u = ilog(D // (h * (g - 1)), g) - mk
    st.scalars["u"] = u
    require(chk, "h*(g-1)*g^(m*k+u) <= n-h", h * (g - 1) * power(g, mk + u), "<=", D)
    require(chk, "n-h < h*(g-1)*g^(m*k+u+1)", D, "<", h * (g - 1) * power(g, mk + u + 1))
    require(chk, "u >= 2", u, ">=", 2)
    require(chk, "u <= m-t-1", u, "<=", m - t - 1)
    gmk = power(g, mk)

    if u == m - t - 1:
        st.case = "2.1"

        def tail(v: int) -> int:
            # sum_{j=v}^{m-t-1} h(g-1)g^(mk+j)
            return h * gmk * (power(g, m - t) - power(g, v))

        v = m - t - 1
        while v - 1 >= 2 and tail(v - 1) <= D:
            v -= 1
        st.scalars["v"] = v
        T = tail(v)
        require(chk, "sum_{j=v} h(g-1)g^(mk+j) <= n-h", T, "<=", D)
        require(chk, "n-h < sum_{j=v-1} h(g-1)g^(mk+j)", D, "<", tail(v - 1))
        require(chk, "v >= 3", v, ">=", 3)
        P = power(g, mk + v - 1)
        s = (D - T) // ((g - 1) * P)
        st.scalars["s"] = s
        require(chk, "0 <= s", s, ">=", 0)
        require(chk, "s <= h-1", s, "<=", h - 1)
        sub = s * (g - 1) * P + T
        st.subtracted = sub
        st.child_n = n - sub
        require(chk, "h <= n-s(g-1)g^(mk+v-1)-sum", h, "<=", st.child_n)
        require(chk, "n-s(g-1)g^(mk+v-1)-sum < (g-1)g^(mk+v-1)+h", st.child_n, "<", (g - 1) * P + h)
        st.extra = {"P": P, "s": s, "top": gmk * (power(g, m - t) - power(g, v))}
        return st

    st.case = "2.2"
    Q = power(g, mk + u)
    s = D // ((g - 1) * g * Q)
    q = (D - s * (g - 1) * g * Q) // Q
    st.scalars.update(s=s, q=q)
    require(chk, "g^(t-1)*(g-1) <= s", power(g, t - 1) * (g - 1), "<=", s)
    require(chk, "s <= h-1", s, "<=", h - 1)
    require(chk, "0 <= q", q, ">=", 0)
    require(chk, "q <= g(g-1)-1", q, "<=", g * (g - 1) - 1)
    require(chk, "q <= h-2", q, "<=", h - 2)
    sub = q * Q + s * (g - 1) * g * Q
    st.subtracted = sub
    st.child_n = n - sub
    require(chk, "h <= n-q*g^(mk+u)-s(g-1)g^(mk+u+1)", h, "<=", st.child_n)
    require(chk, "n-q*g^(mk+u)-s(g-1)g^(mk+u+1) < g^(mk+u)+h", st.child_n, "<", Q + h)
    if q > s:
        st.repair = "q>s"
    st.extra = {"Q": Q, "s": s, "q": q}
    return st


def _rebuild(st: _Step, child: list[int] | None, p: Thm2Params) -> list[int]:
    g, h = p.g, p.h
    chk = st.checks
    if st.case == "base-h":
        return [1] * h
    if st.case == "base-h+i":
        return [1] * (h - 1) + [st.scalars["i"] + 1]

    parts = list(child)
    if st.case == "1.1":
        sub = st.extra["sub"]
        idx = next((j for j, a in enumerate(parts) if a < sub), None)
        require(chk, "some a_j < (g-1)g^(mk+i)", 0 if idx is None else 1, "==", 1)
        parts[idx] += sub
        require(chk, "a_j + (g-1)g^(mk+i) in A_g(W_0)", int(_in_w0(parts[idx], p)), "==", 1)
        st.values["repaired"] = [idx]
    elif st.case == "1.2":
        sub, e = st.extra["sub"], st.extra["e"]
        small = [j for j, a in enumerate(parts) if a < sub]
        require(chk, "#{a_j < (g-1)g^(mk+m-t-1)} >= g-1", len(small), ">=", g - 1)
        add = power(g, e)
        for j in small[: g - 1]:
            parts[j] += add
            require(chk, f"a_{j} + g^(mk+m-t-1) in A_g(W_0)", int(_in_w0(parts[j], p)), "==", 1)
        st.values["repaired"] = small[: g - 1]
    elif st.case == "2.1":
        P, s, top = st.extra["P"], st.extra["s"], st.extra["top"]
        limit = P * g
        for j, b in enumerate(parts):
            require(chk, f"b_{j} < g^(mk+v)", b, "<", limit)
        big = [j for j, b in enumerate(parts) if b >= P]
        l = len(big)
        st.scalars["l"] = l
        require(chk, "l <= g-1", l, "<=", g - 1)
        r = {j: parts[j] // P for j in big}
        require(chk, "r_1+...+r_l <= g-1", sum(r.values()), "<=", g - 1)
        st.values.update(b=list(parts), b_prime=[parts[j] - r[j] * P for j in big], r=[r[j] for j in big])
        if l > s + 1:
            st.repair = "l>s+1"
        # the first large b_j collects every r_j; the next s parts take (g-1)P
        gather = big[0] if big else 0
        others = [j for j in big if j != gather] + [j for j in range(h) if j not in big and j != gather]
        for j in big:
            parts[j] -= r[j] * P
        parts[gather] += sum(r.values()) * P
        for j in others[:s]:
            parts[j] += (g - 1) * P
        for j in range(h):
            parts[j] += top
    else:  # 2.2
        Q, s, q = st.extra["Q"], st.extra["s"], st.extra["q"]
        big = [j for j, c in enumerate(parts) if c >= Q]
        require(chk, "#{c_j >= g^(mk+u)} <= 1", len(big), "<=", 1)
        st.values["c"] = list(parts)
        keep = big[0] if big else 0
        others = [j for j in range(h) if j != keep]
        require(chk, "s <= #others", s, "<=", len(others))
        for j in others[:q]:
            parts[j] += Q
        for j in others[:s]:
            parts[j] += (g - 1) * g * Q
        for j in others[: max(q, s)]:
            require(chk, f"c_{j} modified stays in A_g(W_0)", int(_in_w0(parts[j], p)), "==", 1)
    require(chk, "sum of parts == n", sum(parts), "==", st.n)
    return parts


def decompose_thm2(
    n: int, p: Thm2Params, memo: dict | None = None
) -> DecompositionCertificate:
    """h parts of A_g(W_0) summing to n, for n >= h.

    ``memo`` maps already-decomposed n to their parts; passing one dict
    through an ascending sweep turns each call into a single step.
    """
    h = p.h
    if n < h:
        raise OutOfRangeError(f"n = {n} < h = {h}")
    steps: list[_Step] = []
    cur = n
    leaf: list[int] | None = None
    try:
        while True:
            if memo is not None and cur in memo and steps:
                leaf = list(memo[cur])
                break
            st = _plan(cur, p)
            steps.append(st)
            if st.child_n is None:
                break
            require(st.checks, "recursion decreases", st.child_n, "<", cur)
            cur = st.child_n
        parts = leaf
        for st in reversed(steps):
            parts = _rebuild(st, parts, p)
            if memo is not None:
                memo[st.n] = tuple(parts)
    except InvariantViolation as exc:
        raise InvariantViolation(str(exc), trace=_trace(steps, leaf_n=cur if leaf else None), n=n) from exc
    return DecompositionCertificate(
        n=n,
        g=p.g,
        h=h,
        parts=tuple(parts),
        part_cells=(0,) * h,
        forbidden=None,
        trace=_trace(steps, leaf_n=cur if leaf is not None else None),
        target_cell=0,
    )


def _trace(steps: list[_Step], leaf_n: int | None) -> DecompositionTrace:
    node = DecompositionTrace(case="memo", n=leaf_n) if leaf_n is not None else None
    for st in reversed(steps):
        node = DecompositionTrace(
            case=st.case,
            n=st.n,
            scalars=dict(st.scalars),
            subtracted=st.subtracted,
            values=dict(st.values),
            checks=tuple(st.checks),
            repair=st.repair,
            child=node,
        )
    return node
