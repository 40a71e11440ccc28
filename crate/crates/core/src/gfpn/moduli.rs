//! Default moduli: the Conway polynomials for every (p, N) in the shipped range.
//!
//! Coefficients are written high-to-low as digit strings, so `1011011` is
//! `w^6 + w^4 + w^3 + w + 1`. Conway polynomials are primitive, so the root `w`
//! is the designated generator `g` of every default field.

pub(crate) const DEFAULT_MODULI: &[(u32, u32, &str)] = &[
    (2, 1, "11"),
    (2, 2, "111"),
    (2, 3, "1011"),
    (2, 4, "10011"),
    (2, 5, "100101"),
    (2, 6, "1011011"),
    (2, 7, "10000011"),
    (2, 8, "100011101"),
    (2, 9, "1000010001"),
    (2, 10, "10001101111"),
    (2, 11, "100000000101"),
    (2, 12, "1000011101011"),
    (2, 13, "10000000011011"),
    (2, 14, "100000010101001"),
    (2, 15, "1000000000110101"),
    (2, 16, "10000000000101101"),
    (2, 17, "100000000000001001"),
    (2, 18, "1000001010000000011"),
    (2, 19, "10000000000000100111"),
    (2, 20, "100000000011011110011"),
    (3, 1, "11"),
    (3, 2, "122"),
    (3, 3, "1021"),
    (3, 4, "12002"),
    (3, 5, "100021"),
    (3, 6, "1020122"),
    (3, 7, "10000201"),
    (3, 8, "100210222"),
    (3, 9, "1000002211"),
    (3, 10, "10002220012"),
    (3, 11, "100000000201"),
    (3, 12, "1000001110102"),
    (5, 1, "13"),
    (5, 2, "142"),
    (5, 3, "1033"),
    (5, 4, "10442"),
    (5, 5, "100043"),
    (5, 6, "1014102"),
    (5, 7, "10000033"),
    (5, 8, "100010342"),
    (7, 1, "14"),
    (7, 2, "163"),
    (7, 3, "1604"),
    (7, 4, "10543"),
    (7, 5, "100014"),
    (7, 6, "1015463"),
    (7, 7, "10000064"),
    (7, 8, "100004623"),
];

pub(crate) fn default_modulus(p: u32, n: u32) -> Option<Vec<u32>> {
    DEFAULT_MODULI
        .iter()
        .find(|&&(q, m, _)| q == p && m == n)
        .map(|&(_, _, s)| s.bytes().rev().map(|b| u32::from(b - b'0')).collect())
}
