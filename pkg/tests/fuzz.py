"""Random comment generator biased towards emoji edge cases."""
import random

from hypothesis import strategies as st

PIECES = (
    "a", "b", "x", "1", " ", "  ", "\n", "\t", ".", ",", "?", "!", ":", ";", "(", ")", "<", ">",
    "-", "_", "+", "U", "u", "D", "P", "3", "'",
    ":)", ":-)", ":(", ";)", ":D", "<3", "(y)", ":P", "xD",
    ":smile:", ":+1:", ":thumbsup:", ":tada:", ":nope:", "::", ":smile", "host:x:1",
    "+U1F60A", "U+1F44D", "+U1F3FB", "U+0041", "+U200D", "U+FE0F", "+U1F1FA",
    "\U0001F44D", "\U0001F60A", "\U0001F3FB", "‍", "️", "❤", "\U0001F1FA", "\U0001F1F8",
    "\U0001F468‍\U0001F469‍\U0001F467", "\U0001F44D\U0001F3FD", "1️⃣", "é", "é",
    "\U0001F3F4\U000E0067\U000E0062\U000E0065\U000E006E\U000E0067\U000E007F", "✅", "✏️",
)


def random_comment(rng: random.Random, max_pieces: int = 12) -> str:
    return "".join(rng.choice(PIECES) for _ in range(rng.randint(0, max_pieces)))


def fuzz_corpus(n: int, seed: int = 0):
    rng = random.Random(seed)
    for _ in range(n):
        yield random_comment(rng)


comments = st.lists(st.one_of(st.sampled_from(PIECES), st.text(max_size=3)), max_size=12).map("".join)
