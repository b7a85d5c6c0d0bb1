//! The BLAKE2b G-function and round permutation as used by Lyra2.
//!
//! Lyra2 uses the bare round: no message words and no sigma schedule. Input
//! enters the state by XOR in the duplex layer before the permutation runs,
//! so the all-zero state is a fixed point of [`round`].

/// The 1024-bit permutation state: 16 little-endian 64-bit words.
pub type State1024 = [u64; 16];

/// The 512-bit BLAKE2b initialization vector (fractional parts of the square
/// roots of the first eight primes).
pub const BLAKE2B_IV: [u64; 8] = [
    0x6A09E667F3BCC908,
    0xBB67AE8584CAA73B,
    0x3C6EF372FE94F82B,
    0xA54FF53A5F1D36F1,
    0x510E527FADE682D1,
    0x9B05688C2B3E6C1F,
    0x1F83D9ABFB41BD6B,
    0x5BE0CD19137E2179,
];

/// Number of rounds in a full permutation.
pub const FULL_ROUNDS: usize = 12;

/// Number of rounds in a reduced-round (rho) permutation.
pub const REDUCED_ROUNDS: usize = 1;

/// The G-function: eight add / XOR / rotate-right steps mixing four words.
#[inline]
pub fn g_function(a: u64, b: u64, c: u64, d: u64) -> (u64, u64, u64, u64) {
    let a = a.wrapping_add(b);
    let d = (d ^ a).rotate_right(32);
    let c = c.wrapping_add(d);
    let b = (b ^ c).rotate_right(24);
    let a = a.wrapping_add(b);
    let d = (d ^ a).rotate_right(16);
    let c = c.wrapping_add(d);
    let b = (b ^ c).rotate_right(63);
    (a, b, c, d)
}

/// Algebraic inverse of [`g_function`]: undoes the eight steps in reverse.
#[inline]
pub fn g_function_inv(a: u64, b: u64, c: u64, d: u64) -> (u64, u64, u64, u64) {
    let b1 = b.rotate_left(63) ^ c;
    let c1 = c.wrapping_sub(d);
    let d1 = d.rotate_left(16) ^ a;
    let a1 = a.wrapping_sub(b1);
    let b0 = b1.rotate_left(24) ^ c1;
    let c0 = c1.wrapping_sub(d1);
    let d0 = d1.rotate_left(32) ^ a1;
    let a0 = a1.wrapping_sub(b0);
    (a0, b0, c0, d0)
}

#[inline]
fn g_in_place(s: &mut State1024, a: usize, b: usize, c: usize, d: usize) {
    let (na, nb, nc, nd) = g_function(s[a], s[b], s[c], s[d]);
    s[a] = na;
    s[b] = nb;
    s[c] = nc;
    s[d] = nd;
}

#[inline]
fn g_inv_in_place(s: &mut State1024, a: usize, b: usize, c: usize, d: usize) {
    let (na, nb, nc, nd) = g_function_inv(s[a], s[b], s[c], s[d]);
    s[a] = na;
    s[b] = nb;
    s[c] = nc;
    s[d] = nd;
}

/// One round: four G-blocks over the columns, then four over the diagonals.
pub fn round(s: &mut State1024) {
    g_in_place(s, 0, 4, 8, 12);
    g_in_place(s, 1, 5, 9, 13);
    g_in_place(s, 2, 6, 10, 14);
    g_in_place(s, 3, 7, 11, 15);
    g_in_place(s, 0, 5, 10, 15);
    g_in_place(s, 1, 6, 11, 12);
    g_in_place(s, 2, 7, 8, 13);
    g_in_place(s, 3, 4, 9, 14);
}

/// Inverse of [`round`]: inverse-G over the diagonals, then the columns.
pub fn round_inv(s: &mut State1024) {
    g_inv_in_place(s, 3, 4, 9, 14);
    g_inv_in_place(s, 2, 7, 8, 13);
    g_inv_in_place(s, 1, 6, 11, 12);
    g_inv_in_place(s, 0, 5, 10, 15);
    g_inv_in_place(s, 3, 7, 11, 15);
    g_inv_in_place(s, 2, 6, 10, 14);
    g_inv_in_place(s, 1, 5, 9, 13);
    g_inv_in_place(s, 0, 4, 8, 12);
}

/// Applies [`round`] the given number of times.
pub fn permute(s: &mut State1024, rounds: usize) {
    for _ in 0..rounds {
        round(s);
    }
}
