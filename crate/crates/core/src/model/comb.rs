//! Compositions, K-coefficients, and the word combinatorics behind the
//! resurgence bound.

use crate::coeffring::Rational;
use crate::error::Error;
use num::BigInt;
use std::collections::HashSet;

/// A composition of n: a nonempty ordered sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self, Error> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidArgument(
                "composition parts must be nonempty positive integers".into(),
            ));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Weight n = sum of parts.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Length q.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // compositions are nonempty by construction
    }
}

/// A composition together with its K-coefficient.
#[derive(Clone, Debug)]
pub struct KCoefficient {
    pub composition: Composition,
    pub value: Rational,
}

/// K-coefficient by the recursion K_{(n)} = 1 and
/// K_{i1..iq} = (1 + 3(i1+…+i_{q−1}))·K_{i1..i_{q−1}}, i.e. the product of
/// (1+3·prefix sum) over the proper prefixes. Strictly positive integers.
pub fn k_coefficient(c: &Composition) -> Rational {
    let mut acc = BigInt::from(1);
    let mut prefix = 0u64;
    for &p in &c.parts[..c.parts.len() - 1] {
        prefix += p as u64;
        acc *= BigInt::from(1 + 3 * prefix);
    }
    Rational::from_integer(acc)
}

/// Iterate all 2^{n−1} compositions of n without materializing them: each
/// bitmask over the n−1 gap positions cuts the row 1+1+…+1 into parts.
pub fn compositions_mask_iter(n: u32) -> Result<impl Iterator<Item = Composition>, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("weight must be >= 1".into()));
    }
    if n > 25 {
        return Err(Error::InvalidArgument(format!(
            "refusing to enumerate 2^{} compositions",
            n - 1
        )));
    }
    let total: u32 = 1 << (n - 1);
    Ok((0..total).map(move |mask| {
        let mut parts = Vec::new();
        let mut run = 1u32;
        for bit in 0..(n - 1) {
            if mask & (1 << bit) != 0 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        Composition { parts }
    }))
}

/// Enumerate all compositions of n and count them per length q. Index q of
/// the returned vector (1-based; slot 0 unused) holds the count, which
/// equals C(n−1, q−1); the total is 2^{n−1}.
pub fn composition_census(n: u32) -> Result<Vec<u64>, Error> {
    let mut counts = vec![0u64; n as usize + 1];
    for c in compositions_mask_iter(n)? {
        counts[c.len()] += 1;
    }
    Ok(counts)
}

#[derive(Clone, Debug)]
pub struct WordCountReport {
    pub n: u32,
    pub count: u64,
    pub all_distinct: bool,
    pub branches_disjoint: bool,
}

/// Generate the word set W_n over the alphabet {⋆, .} by the recursion
/// W_1 = {∅}, W_{n+1} = {⋆w} ∪ {⋆.w}, verify the two branches are disjoint,
/// and return |W_n| (= 2^{n−1}).
pub fn word_count(n: u32) -> Result<WordCountReport, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("word depth must be >= 1".into()));
    }
    if n > 20 {
        return Err(Error::InvalidArgument(format!(
            "refusing to build 2^{} words",
            n - 1
        )));
    }
    let mut words: HashSet<String> = HashSet::new();
    words.insert(String::new());
    let mut branches_disjoint = true;
    for _ in 1..n {
        let mut next: HashSet<String> = HashSet::with_capacity(words.len() * 2);
        let a: HashSet<String> = words.iter().map(|w| format!("*{w}")).collect();
        let b: HashSet<String> = words.iter().map(|w| format!("*.{w}")).collect();
        if a.intersection(&b).next().is_some() {
            branches_disjoint = false;
        }
        next.extend(a);
        next.extend(b);
        words = next;
    }
    // set-based deduplication doubles as the pairwise-distinct check:
    // if any collision had happened the count would fall short of 2^{n-1}
    let count = words.len() as u64;
    Ok(WordCountReport {
        n,
        count,
        all_distinct: count == 1 << (n - 1),
        branches_disjoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;

    fn comp(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn k_single_part_is_one() {
        for n in 1..=9 {
            assert_eq!(k_coefficient(&comp(&[n])), rat(1, 1));
        }
    }

    #[test]
    fn k_one_one_is_four() {
        assert_eq!(k_coefficient(&comp(&[1, 1])), rat(4, 1));
    }

    #[test]
    fn k_all_ones_closed_form() {
        // K_{(1^n)} = Π_{j=1}^{n−1} (3j+1); n = 3 gives 28
        assert_eq!(k_coefficient(&comp(&[1, 1, 1])), rat(28, 1));
        for n in 1..=8u64 {
            let parts = vec![1u32; n as usize];
            let mut want = rat(1, 1);
            for j in 1..n {
                want = want * rat(3 * j as i64 + 1, 1);
            }
            assert_eq!(k_coefficient(&comp(&parts)), want);
        }
        // spot value for n = 8: 4·7·10·13·16·19·22
        assert_eq!(k_coefficient(&comp(&[1; 8])), rat(24_344_320, 1));
    }

    #[test]
    fn census_counts() {
        assert_eq!(composition_census(1).unwrap()[1], 1);
        let c4 = composition_census(4).unwrap();
        assert_eq!(c4[2], 3); // C(3,1)
        let c10 = composition_census(10).unwrap();
        assert_eq!(c10.iter().sum::<u64>(), 512);
        for (q, &count) in c10.iter().enumerate().skip(1) {
            let mut want = 1u64;
            for i in 0..(q as u64 - 1) {
                want = want * (9 - i) / (i + 1);
            }
            assert_eq!(count, want, "length {q}");
        }
    }

    #[test]
    fn words() {
        let w1 = word_count(1).unwrap();
        assert_eq!(w1.count, 1);
        let w2 = word_count(2).unwrap();
        assert_eq!(w2.count, 2);
        let w10 = word_count(10).unwrap();
        assert_eq!(w10.count, 512);
        assert!(w10.all_distinct);
        assert!(w10.branches_disjoint);
    }

    #[test]
    fn composition_invariants() {
        assert!(Composition::new(vec![]).is_err());
        assert!(Composition::new(vec![1, 0]).is_err());
        for c in compositions_mask_iter(6).unwrap() {
            assert_eq!(c.weight(), 6);
        }
    }

    #[test]
    fn k_coefficients_strictly_positive() {
        use num::Signed;
        for n in 1..=8u32 {
            for c in compositions_mask_iter(n).unwrap() {
                assert!(k_coefficient(&c).is_positive(), "{c:?}");
            }
        }
    }
}
