#!/usr/bin/env python3
"""Independent reference implementation of the Lyra2 variant used in Lyra2REv2.

This is a direct scalar transliteration of the public Lyra2REv2 reference code
(sponge.c / lyra2.c with timeCost=1, nRows=4, nCols=4, 32-byte password used
as its own salt). It exists only to generate frozen test vectors for the Rust
implementation; it shares no code with it.

Usage:
  reference_lyra2.py selftest              run internal consistency checks
  reference_lyra2.py frozen                print frozen constants for unit tests
  reference_lyra2.py vectors COUNT SEED    emit JSON-lines test vectors on stdout
"""

import json
import sys

MASK = (1 << 64) - 1

BLAKE2B_IV = [
    0x6A09E667F3BCC908, 0xBB67AE8584CAA73B,
    0x3C6EF372FE94F82B, 0xA54FF53A5F1D36F1,
    0x510E527FADE682D1, 0x9B05688C2B3E6C1F,
    0x1F83D9ABFB41BD6B, 0x5BE0CD19137E2179,
]

TIME_COST = 1
N_ROWS = 4
N_COLS = 4
BLOCK_WORDS = 12  # 768-bit matrix cell


def ror(x, n):
    return ((x >> n) | (x << (64 - n))) & MASK


def g(v, a, b, c, d):
    v[a] = (v[a] + v[b]) & MASK
    v[d] = ror(v[d] ^ v[a], 32)
    v[c] = (v[c] + v[d]) & MASK
    v[b] = ror(v[b] ^ v[c], 24)
    v[a] = (v[a] + v[b]) & MASK
    v[d] = ror(v[d] ^ v[a], 16)
    v[c] = (v[c] + v[d]) & MASK
    v[b] = ror(v[b] ^ v[c], 63)


def round_lyra(v):
    g(v, 0, 4, 8, 12)
    g(v, 1, 5, 9, 13)
    g(v, 2, 6, 10, 14)
    g(v, 3, 7, 11, 15)
    g(v, 0, 5, 10, 15)
    g(v, 1, 6, 11, 12)
    g(v, 2, 7, 8, 13)
    g(v, 3, 4, 9, 14)


def g_tuple(a, b, c, d):
    v = [a, b, c, d] + [0] * 12
    g(v, 0, 1, 2, 3)
    return v[0], v[1], v[2], v[3]


def bootstrap_state(pwd):
    """Initial state plus the two full-round 512-bit absorbs."""
    assert len(pwd) == 32
    state = [0] * 8 + list(BLAKE2B_IV)
    buf = bytearray()
    buf += pwd + pwd  # password and salt (salt == password in Lyra2REv2)
    for val in (32, 32, 32, TIME_COST, N_ROWS, N_COLS):
        buf += val.to_bytes(8, "little")
    buf += b"\x80"
    while len(buf) % 64 != 0:
        buf += b"\x00"
    buf[-1] |= 0x01
    for off in range(0, len(buf), 64):
        for i in range(8):
            state[i] ^= int.from_bytes(buf[off + 8 * i : off + 8 * i + 8], "little")
        for _ in range(12):
            round_lyra(state)
    return state


def setup(state):
    M = [[None] * N_COLS for _ in range(N_ROWS)]
    # Row 0: reduced squeezes, columns written last to first.
    for col in range(N_COLS):
        M[0][N_COLS - 1 - col] = state[:BLOCK_WORDS]
        round_lyra(state)
    # Row 1: reduced duplexing of row 0.
    for col in range(N_COLS):
        for i in range(BLOCK_WORDS):
            state[i] ^= M[0][col][i]
        round_lyra(state)
        M[1][N_COLS - 1 - col] = [M[0][col][i] ^ state[i] for i in range(BLOCK_WORDS)]
    # Rows 2..R-1: duplex the word-wise sum of two earlier rows.
    for row0 in range(2, N_ROWS):
        prev0 = row0 - 1
        row1 = row0 - 2
        for col in range(N_COLS):
            for i in range(BLOCK_WORDS):
                state[i] ^= (M[row1][col][i] + M[prev0][col][i]) & MASK
            round_lyra(state)
            M[row0][N_COLS - 1 - col] = [
                M[prev0][col][i] ^ state[i] for i in range(BLOCK_WORDS)
            ]
            M[row1][col] = [
                M[row1][col][i] ^ state[(i + 11) % 12] for i in range(BLOCK_WORDS)
            ]
    return M


def wandering(state, M):
    prev0 = N_ROWS - 1
    row1 = None
    for row0 in range(N_ROWS * TIME_COST):
        row1 = state[0] % N_ROWS
        for col in range(N_COLS):
            for i in range(BLOCK_WORDS):
                state[i] ^= (M[row1][col][i] + M[prev0][col][i]) & MASK
            round_lyra(state)
            M[row0][col] = [M[row0][col][i] ^ state[i] for i in range(BLOCK_WORDS)]
            # When row0 == row1 this reads the cell just rewritten above.
            M[row1][col] = [
                M[row1][col][i] ^ state[(i + 11) % 12] for i in range(BLOCK_WORDS)
            ]
        prev0 = row0
    return row1


def wrapup(state, M, row1):
    for i in range(BLOCK_WORDS):
        state[i] ^= M[row1][0][i]
    for _ in range(12):
        round_lyra(state)
    return b"".join(state[i].to_bytes(8, "little") for i in range(4))


def lyra2(pwd):
    state = bootstrap_state(pwd)
    M = setup(state)
    row1 = wandering(state, M)
    return wrapup(state, M, row1)


class SplitMix64:
    """splitmix64; must match the Rust-side generator word for word."""

    def __init__(self, seed):
        self.x = seed & MASK

    def next(self):
        self.x = (self.x + 0x9E3779B97F4A7C15) & MASK
        z = self.x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def next_32_bytes(self):
        return b"".join(self.next().to_bytes(8, "little") for _ in range(4))


def words_hex(ws):
    return ["0x%016X" % w for w in ws]


def matrix_bytes(M):
    out = bytearray()
    for row in range(N_ROWS):
        for col in range(N_COLS):
            for w in M[row][col]:
                out += w.to_bytes(8, "little")
    return bytes(out)


def frozen():
    print("g(0,0,0,1) =", words_hex(g_tuple(0, 0, 0, 1)))
    print("g(1,2,3,4) =", words_hex(g_tuple(1, 2, 3, 4)))
    s = [0] * 16
    s[15] = 1
    round_lyra(s)
    print("round(e15) =", words_hex(s))
    pwd = bytes(32)
    state = bootstrap_state(pwd)
    print("bootstrap(zero) =", words_hex(state))
    # state after only the first absorb (pwd || pwd), for the sponge test
    s2 = [0] * 8 + list(BLAKE2B_IV)
    for _ in range(12):
        round_lyra(s2)  # pwd||pwd is all-zero, XOR is a no-op
    print("absorb(pwd||pwd, zero) =", words_hex(s2))
    M = setup(state)
    print("setup_state(zero) =", words_hex(state))
    print("setup_matrix(zero) =", matrix_bytes(M).hex())
    row1 = wandering(state, M)
    print("wander_state(zero) =", words_hex(state))
    print("wander_row1(zero) =", row1)
    print("wander_matrix(zero) =", matrix_bytes(M).hex())
    print("digest(zero) =", wrapup(state, M, row1).hex())
    print("digest(00..1f) =", lyra2(bytes(range(32))).hex())


def selftest():
    # Hand-checked single G evaluation.
    assert g_tuple(0, 0, 0, 1) == (
        0x100,
        0x0200000200020200,
        0x0100000100010000,
        0x0100000000010000,
    )
    # Zero is a fixed point of the bare round.
    s = [0] * 16
    round_lyra(s)
    assert s == [0] * 16
    # Determinism.
    assert lyra2(bytes(32)) == lyra2(bytes(32))
    print("selftest ok")


def vectors(count, seed):
    rng = SplitMix64(seed)
    for _ in range(count):
        pwd = rng.next_32_bytes()
        print(json.dumps({"input": pwd.hex(), "digest": lyra2(pwd).hex()}))


if __name__ == "__main__":
    cmd = sys.argv[1] if len(sys.argv) > 1 else "selftest"
    if cmd == "selftest":
        selftest()
    elif cmd == "frozen":
        frozen()
    elif cmd == "vectors":
        vectors(int(sys.argv[2]), int(sys.argv[3]))
    else:
        sys.exit("unknown command: " + cmd)
