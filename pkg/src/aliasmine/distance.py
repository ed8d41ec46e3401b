"""Unrestricted Damerau-Levenshtein distance (Lowrance-Wagner)."""

from __future__ import annotations


def damerau_levenshtein(a: str, b: str) -> int:
    """Edit distance with insertions, deletions, substitutions and adjacent
    transpositions, where a transposed pair may be edited further.

    Case-sensitive; ``"Jupyter"`` and ``"jupyter"`` are at distance 1.
    """
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if not la:
        return lb
    if not lb:
        return la

    inf = la + lb
    last_row: dict[str, int] = {}
    # (la + 2) x (lb + 2) matrix with a sentinel border of ``inf``
    d = [[inf] * (lb + 2) for _ in range(la + 2)]
    for i in range(la + 1):
        d[i + 1][0] = inf
        d[i + 1][1] = i
    for j in range(lb + 1):
        d[0][j + 1] = inf
        d[1][j + 1] = j

    for i in range(1, la + 1):
        ca = a[i - 1]
        last_match_col = 0
        row = d[i + 1]
        prev = d[i]
        for j in range(1, lb + 1):
            cb = b[j - 1]
            k = last_row.get(cb, 0)
            l = last_match_col
            if ca == cb:
                cost = 0
                last_match_col = j
            else:
                cost = 1
            row[j + 1] = min(
                prev[j] + cost,
                row[j] + 1,
                prev[j + 1] + 1,
                d[k][l] + (i - k - 1) + 1 + (j - l - 1),
            )
        last_row[ca] = i
    return d[la + 1][lb + 1]


def nearest(word: str, candidates, max_distance: int = 2) -> list[tuple[int, str]]:
    """Candidates within ``max_distance`` of ``word``, closest first."""
    out = []
    lw = len(word)
    for cand in candidates:
        if cand == word or abs(len(cand) - lw) > max_distance:
            continue
        dist = damerau_levenshtein(word, cand)
        if dist <= max_distance:
            out.append((dist, cand))
    out.sort()
    return out
