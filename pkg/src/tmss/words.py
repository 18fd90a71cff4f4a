"""Free-group words over x_0, ..., x_{q-1} and the cyclic substitution.

A letter is a pair ``(i, sign)`` with ``0 <= i < q`` and ``sign`` in
``{+1, -1}``; a word is a tuple of letters.  The substitution ``theta`` sends
``x_i`` to the length-q block ``x_i x_{i+1} ... x_{i-1}`` (indices mod q) and
an inverse letter to the inverse of that block, so it extends to an
endomorphism of the free group.  The rotation ``gamma`` sends ``x_i`` to
``x_{i+shift}`` and commutes with ``theta``.  Iterating ``theta`` on ``x_0``
converges to an infinite fixed word; ``tm_prefix`` returns its prefixes, which
for q = 2 form the Thue-Morse sequence.
"""

from __future__ import annotations

import re

Letter = tuple[int, int]
Word = tuple[Letter, ...]


class InvalidLetterError(ValueError):
    """Raised when a letter index falls outside 0 .. q-1."""


def check_word(word: Word, q: int) -> Word:
    """Validate every letter of ``word`` against the alphabet size ``q``."""
    for i, sign in word:
        if not 0 <= i < q:
            raise InvalidLetterError(f"letter x{i} is outside x0..x{q - 1}")
        if sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {sign}")
    return word


def free_reduce(word: Word) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    stack: list[Letter] = []
    for let in word:
        if stack and stack[-1][0] == let[0] and stack[-1][1] == -let[1]:
            stack.pop()
        else:
            stack.append(let)
    return tuple(stack)


def inverse(word: Word) -> Word:
    return tuple((i, -sign) for i, sign in reversed(word))


def power(word: Word, k: int) -> Word:
    if k < 0:
        return inverse(word) * (-k)
    return word * k


def commutator(a: Word, b: Word) -> Word:
    return a + b + inverse(a) + inverse(b)


def theta(word: Word, q: int) -> Word:
    """Apply the substitution once.  No free reduction: |theta(w)| = q|w|."""
    check_word(word, q)
    out: list[Letter] = []
    for i, sign in word:
        if sign == 1:
            out.extend(((i + k) % q, 1) for k in range(q))
        else:
            out.extend(((i + k) % q, -1) for k in range(q - 1, -1, -1))
    return tuple(out)


def theta_iter(word: Word, q: int, n: int) -> Word:
    if n < 0:
        raise ValueError("iteration count must be nonnegative")
    for _ in range(n):
        word = theta(word, q)
    return word


def gamma(word: Word, shift: int, q: int) -> Word:
    """Rotate every letter index by ``shift`` modulo q, keeping signs."""
    return tuple(((i + shift) % q, sign) for i, sign in word)


def ascending_word(q: int) -> Word:
    """The word x_0 x_1 ... x_{q-1}."""
    return tuple((i, 1) for i in range(q))


def tm_prefix(q: int, n: int) -> tuple[int, ...]:
    """First ``n`` letter indices of the fixed word of ``theta``.

    Works by iterating the substitution on x_0 and truncating to ``n``
    letters each round; truncation is safe because the fixed word begins
    with theta^k(x_0) for every k, so memory stays linear in ``n``.
    """
    if q < 2:
        raise ValueError("alphabet size must be at least 2")
    if n < 0:
        raise ValueError("prefix length must be nonnegative")
    seq: list[int] = [0]
    while len(seq) < n:
        grown: list[int] = []
        for i in seq:
            grown.extend((i + k) % q for k in range(q))
            if len(grown) >= n:
                break
        seq = grown
    return tuple(seq[:n])


_TOKEN = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str, q: int) -> Word:
    """Parse ``"x0 x1^-1 x2"`` style input; ``"1"`` stands for the empty word."""
    out: list[Letter] = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if m is None:
            raise ValueError(f"cannot parse word token {tok!r}")
        i = int(m.group(1))
        if not 0 <= i < q:
            raise InvalidLetterError(f"letter x{i} is outside x0..x{q - 1}")
        exponent = int(m.group(2)) if m.group(2) is not None else 1
        sign = 1 if exponent >= 0 else -1
        out.extend(((i, sign),) * abs(exponent))
    return tuple(out)


def render_word(word: Word) -> str:
    """Inverse of ``parse_word`` up to grouping of adjacent equal letters."""
    if not word:
        return "1"
    parts: list[str] = []
    idx = 0
    while idx < len(word):
        i, sign = word[idx]
        run = 1
        while idx + run < len(word) and word[idx + run] == (i, sign):
            run += 1
        exponent = run * sign
        parts.append(f"x{i}" if exponent == 1 else f"x{i}^{exponent}")
        idx += run
    return " ".join(parts)
