//! Permutations of finite degree and words over signed generator indices.
//!
//! Points are 1-based in every public API (`apply`, `from_images`, `images`,
//! serialization) and stored 0-based internally. Composition follows
//! `(a ∘ b)(i) = a(b(i))`: the rightmost factor acts first.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Rational, Result};

/// An element of `Sym(n)` carrying its degree `n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// The identity of `Sym(n)`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutation degree must be positive");
        Permutation { map: (0..n).collect() }
    }

    /// Build from a 1-based image array, e.g. `[2, 3, 1]` for the cycle (1 2 3).
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("degree must be at least 1".into()));
        }
        let mut seen = vec![false; n];
        let mut map = Vec::with_capacity(n);
        for &img in images {
            if img == 0 || img > n {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[img - 1], true) {
                return Err(Error::InvalidPermutation(format!("image {img} repeated")));
            }
            map.push(img - 1);
        }
        Ok(Permutation { map })
    }

    /// Build from disjoint cycles written with 1-based points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut touched = vec![false; n + 1];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p > n {
                    return Err(Error::InvalidPermutation(format!("point {p} outside 1..={n}")));
                }
                if std::mem::replace(&mut touched[p], true) {
                    return Err(Error::InvalidPermutation(format!("point {p} in two cycles")));
                }
                images[p - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    pub(crate) fn from_map_unchecked(map: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = map.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v)
        });
        Permutation { map }
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1] + 1
    }

    #[inline]
    pub(crate) fn apply0(&self, i: usize) -> usize {
        self.map[i]
    }

    /// 1-based image array.
    pub fn images(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn fixed_points(&self) -> usize {
        self.map.iter().enumerate().filter(|&(i, &v)| i == v).count()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.then_unchecked(other))
    }

    #[inline]
    pub(crate) fn then_unchecked(&self, other: &Self) -> Self {
        Permutation { map: other.map.iter().map(|&j| self.map[j]).collect() }
    }

    /// Number of points `i ≤ min(deg)` with `self(i) == other(i)`.
    pub fn agreements(&self, other: &Self) -> usize {
        self.map.iter().zip(&other.map).filter(|(a, b)| a == b).count()
    }
}

/// `a ∘ b` with the degree check of [`Permutation::compose`].
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    a.compose(b)
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cycle notation; the identity prints as `Id_n`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "Id_{}", self.degree());
        }
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
                first = false;
                p = self.map[p];
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_images(&images).map_err(serde::de::Error::custom)
    }
}

/// A word in signed letters: `+k` is generator (or edge) `k`, `-k` its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct SignedWord {
    letters: Vec<i64>,
}

impl SignedWord {
    pub fn new(letters: Vec<i64>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::InvalidInput("signed word contains the letter 0".into()));
        }
        Ok(SignedWord { letters })
    }

    pub fn empty() -> Self {
        SignedWord::default()
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest `|letter|`, or 0 for the empty word.
    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn check_alphabet(&self, size: usize) -> Result<()> {
        match self.letters.iter().find(|l| l.unsigned_abs() as usize > size) {
            Some(&index) => Err(Error::IndexOutOfRange { index, size }),
            None => Ok(()),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        SignedWord { letters }
    }

    pub fn inverse(&self) -> Self {
        SignedWord { letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// Cancel adjacent `x x⁻¹` pairs until none remain.
    pub fn freely_reduced(&self) -> Self {
        let mut out: Vec<i64> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        SignedWord { letters: out }
    }

    /// Free reduction followed by cancellation across the wrap-around.
    pub fn cyclically_reduced(&self) -> Self {
        let mut w = self.freely_reduced().letters;
        let (mut lo, mut hi) = (0, w.len());
        while hi - lo >= 2 && w[lo] == -w[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        w.truncate(hi);
        w.drain(..lo);
        SignedWord { letters: w }
    }
}

impl<'de> Deserialize<'de> for SignedWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letters = Vec::<i64>::deserialize(d)?;
        SignedWord::new(letters).map_err(serde::de::Error::custom)
    }
}

/// Evaluate `w` under the assignment `images[k-1]` for letter `k`.
///
/// The product is `g₁ ∘ g₂ ∘ … ∘ g_ℓ`; the empty word gives the identity of
/// the common degree.
pub fn evaluate_word(w: &SignedWord, images: &[Permutation]) -> Result<Permutation> {
    let n = common_degree(images)?;
    w.check_alphabet(images.len())?;
    Ok(evaluate_unchecked(w.letters(), images, n))
}

pub(crate) fn common_degree(images: &[Permutation]) -> Result<usize> {
    let Some(first) = images.first() else {
        return Err(Error::InvalidInput("no generator images".into()));
    };
    let n = first.degree();
    if let Some(p) = images.iter().find(|p| p.degree() != n) {
        return Err(Error::DegreeMismatch { left: n, right: p.degree() });
    }
    Ok(n)
}

/// Evaluate assuming indices are in range and degrees agree.
pub(crate) fn evaluate_unchecked(letters: &[i64], images: &[Permutation], n: usize) -> Permutation {
    // Apply letters right to left to each point.
    let mut map: Vec<usize> = (0..n).collect();
    for &l in letters.iter().rev() {
        let g = &images[l.unsigned_abs() as usize - 1];
        if l > 0 {
            for v in map.iter_mut() {
                *v = g.map[*v];
            }
        } else {
            // g⁻¹ via a scratch inverse keeps this O(n) per letter.
            let inv = g.inverse();
            for v in map.iter_mut() {
                *v = inv.map[*v];
            }
        }
    }
    Permutation { map }
}

/// Normalized Hamming distance with errors:
/// `1 − |{i ≤ min(n, N) : a(i) = b(i)}| / max(n, N)`.
pub fn hamming_distance_with_errors(a: &Permutation, b: &Permutation) -> Rational {
    let big = a.degree().max(b.degree()) as i64;
    crate::ratio(big - a.agreements(b) as i64, big)
}

/// Disagreement count `max(n, N) − agreements`; the numerator of the distance
/// over denominator `max(n, N)`.
#[inline]
pub(crate) fn disagreements(a: &Permutation, b: &Permutation) -> usize {
    a.degree().max(b.degree()) - a.agreements(b)
}

/// `(d_h(a, b), ½‖M(a) − M(b)‖²_HS)` with the normalized Hilbert–Schmidt norm
/// `tr(A*A)/n` on permutation matrices.
pub fn hs_distance_check(a: &Permutation, b: &Permutation) -> Result<(Rational, f64)> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch { left: a.degree(), right: b.degree() });
    }
    let n = a.degree();
    let matrix = |p: &Permutation| {
        let mut m = vec![0.0f64; n * n];
        for i in 0..n {
            // column i carries a 1 in row p(i)
            m[p.map[i] * n + i] = 1.0;
        }
        m
    };
    let (ma, mb) = (matrix(a), matrix(b));
    let frob: f64 = ma.iter().zip(&mb).map(|(x, y)| (x - y) * (x - y)).sum();
    let hs = 0.5 * frob / n as f64;
    Ok((hamming_distance_with_errors(a, b), hs))
}

/// All of `Sym(n)` in lexicographic order of image arrays.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation { map: cur.clone() }];
    while next_permutation(&mut cur) {
        out.push(Permutation { map: cur.clone() });
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// A uniformly random element of `Sym(n)`.
pub fn random_permutation<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    use rand::seq::SliceRandom;
    let mut map: Vec<usize> = (0..n).collect();
    map.shuffle(rng);
    Permutation { map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(&[]).is_err());
        assert!(Permutation::from_images(&[1, 1]).is_err());
        assert!(Permutation::from_images(&[0, 1]).is_err());
        assert!(Permutation::from_images(&[3, 1]).is_err());
        assert_eq!(cyc(3, &[&[1, 2, 3]]), p(&[2, 3, 1]));
    }

    #[test]
    fn compose_examples() {
        let t = cyc(2, &[&[1, 2]]);
        assert_eq!(compose(&t, &Permutation::identity(2)).unwrap(), t);
        let c = cyc(3, &[&[1, 2, 3]]);
        let c3 = c.compose(&c).unwrap().compose(&c).unwrap();
        assert!(c3.is_identity());
        // (1 2) ∘ (1 2 3): 1→1, 2→3, 3→2
        let ab = cyc(3, &[&[1, 2]]).compose(&c).unwrap();
        assert_eq!(ab.images(), vec![1, 3, 2]);
        assert!(matches!(
            t.compose(&c),
            Err(Error::DegreeMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn evaluate_word_examples() {
        let t = cyc(2, &[&[1, 2]]);
        assert!(evaluate_word(&SignedWord::empty(), &[t]).unwrap().is_identity());
        let c = cyc(3, &[&[1, 2, 3]]);
        let cube = SignedWord::new(vec![1, 1, 1]).unwrap();
        assert!(evaluate_word(&cube, std::slice::from_ref(&c)).unwrap().is_identity());
        let comm = SignedWord::new(vec![1, 2, -1, -2]).unwrap();
        let v = evaluate_word(&comm, &[c, cyc(3, &[&[1, 2]])]).unwrap();
        assert_eq!(v, cyc(3, &[&[1, 3, 2]]));
    }

    #[test]
    fn evaluate_word_errors() {
        let c = cyc(3, &[&[1, 2, 3]]);
        let w = SignedWord::new(vec![2]).unwrap();
        assert!(matches!(
            evaluate_word(&w, std::slice::from_ref(&c)),
            Err(Error::IndexOutOfRange { index: 2, size: 1 })
        ));
        let w = SignedWord::new(vec![1]).unwrap();
        assert!(evaluate_word(&w, &[c, Permutation::identity(2)]).is_err());
        assert!(SignedWord::new(vec![1, 0]).is_err());
    }

    #[test]
    fn hamming_examples() {
        let id3 = Permutation::identity(3);
        assert_eq!(hamming_distance_with_errors(&id3, &id3), ratio(0, 1));
        let t2 = cyc(2, &[&[1, 2]]);
        assert_eq!(
            hamming_distance_with_errors(&t2, &Permutation::identity(4)),
            ratio(1, 1)
        );
        let t3 = cyc(3, &[&[1, 2]]);
        let c3 = cyc(3, &[&[1, 2, 3]]);
        assert_eq!(hamming_distance_with_errors(&t3, &c3), ratio(2, 3));
        assert_eq!(hamming_distance_with_errors(&c3, &t3), ratio(2, 3));
    }

    #[test]
    fn hs_examples() {
        let id3 = Permutation::identity(3);
        let (d, hs) = hs_distance_check(&id3, &id3).unwrap();
        assert_eq!(d, ratio(0, 1));
        assert_eq!(hs, 0.0);
        let (d, hs) = hs_distance_check(&cyc(2, &[&[1, 2]]), &Permutation::identity(2)).unwrap();
        assert_eq!(d, ratio(1, 1));
        assert!((hs - 1.0).abs() < 1e-12);
        let (d, hs) = hs_distance_check(&cyc(3, &[&[1, 2, 3]]), &cyc(3, &[&[1, 3, 2]])).unwrap();
        assert_eq!(d, ratio(1, 1));
        assert!((hs - 1.0).abs() < 1e-12);
        assert!(hs_distance_check(&id3, &Permutation::identity(2)).is_err());
    }

    #[test]
    fn enumeration_sizes_and_order() {
        for n in 1..=5 {
            let all = all_permutations(n);
            assert_eq!(all.len() as u128, factorial(n));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn word_reduction() {
        let w = SignedWord::new(vec![-2, 1, 3, -3, 2]).unwrap();
        assert_eq!(w.freely_reduced().letters(), &[-2, 1, 2]);
        assert_eq!(w.cyclically_reduced().letters(), &[1]);
        let w = SignedWord::new(vec![1, -1]).unwrap();
        assert!(w.cyclically_reduced().is_empty());
    }

    #[test]
    fn display_cycles() {
        assert_eq!(cyc(4, &[&[1, 3], &[2, 4]]).to_string(), "(1 3)(2 4)");
        assert_eq!(Permutation::identity(2).to_string(), "Id_2");
        let json = serde_json::to_string(&cyc(3, &[&[1, 2, 3]])).unwrap();
        assert_eq!(json, "[2,3,1]");
        let back: Permutation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cyc(3, &[&[1, 2, 3]]));
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
    }
}
