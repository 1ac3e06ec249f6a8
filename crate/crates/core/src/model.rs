//! Genotypes, haplotypes and the resolution algebra.
//!
//! A genotype is a string over {0,1,2}: 0/1 are homozygous sites, 2 is
//! heterozygous. A haplotype is a binary string of the same length. A pair
//! of haplotypes ⟨h,k⟩ resolves a genotype g when h and k agree with g at
//! homozygous sites and differ at heterozygous ones.
//!
//! Both types are stored as packed bit planes, most significant bit first,
//! so that word-wise comparison coincides with lexicographic order on the
//! unpacked symbol sequence and the per-site rules become word-parallel
//! mask operations.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

#[inline]
fn word_of(site: usize) -> usize {
    site / WORD_BITS
}

#[inline]
fn bit_of(site: usize) -> u64 {
    1u64 << (WORD_BITS - 1 - (site % WORD_BITS))
}

/// One chromosome copy: a binary string of instance length m.
///
/// `Ord` is lexicographic on the site sequence (site 1 most significant).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Haplotype {
    words: Vec<u64>,
    len: usize,
}

impl Haplotype {
    pub fn zeros(len: usize) -> Self {
        Haplotype {
            words: vec![0; word_count(len)],
            len,
        }
    }

    /// Parses a contiguous 0/1 string.
    pub fn parse(text: &str) -> Result<Self> {
        let mut h = Haplotype::zeros(text.chars().count());
        for (j, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => h.set(j, true),
                _ => {
                    return Err(Error::parse(1, j + 1, format!("invalid haplotype symbol {c:?}")));
                }
            }
        }
        if h.len == 0 {
            return Err(Error::parse(1, 1, "empty haplotype"));
        }
        Ok(h)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, site: usize) -> bool {
        debug_assert!(site < self.len);
        self.words[word_of(site)] & bit_of(site) != 0
    }

    #[inline]
    pub fn set(&mut self, site: usize, value: bool) {
        debug_assert!(site < self.len);
        if value {
            self.words[word_of(site)] |= bit_of(site);
        } else {
            self.words[word_of(site)] &= !bit_of(site);
        }
    }

    #[inline]
    pub fn flip(&mut self, site: usize) {
        debug_assert!(site < self.len);
        self.words[word_of(site)] ^= bit_of(site);
    }

    /// Returns a copy with one site flipped.
    pub fn flipped(&self, site: usize) -> Self {
        let mut h = self.clone();
        h.flip(site);
        h
    }

    fn xor_words(&self, mask: &[u64]) -> Self {
        let words = self
            .words
            .iter()
            .zip(mask)
            .map(|(a, b)| a ^ b)
            .collect();
        Haplotype {
            words,
            len: self.len,
        }
    }
}

impl fmt::Display for Haplotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Haplotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Haplotype({self})")
    }
}

/// An observed genotype: a string over {0,1,2}.
///
/// Stored as two planes: `het` marks heterozygous sites, `ones` carries the
/// value of homozygous sites (bits under `het` are kept zero so equality and
/// hashing are structural).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Genotype {
    ones: Vec<u64>,
    het: Vec<u64>,
    len: usize,
    het_count: u32,
}

impl Genotype {
    /// Parses a contiguous string over {0,1,2}.
    pub fn parse(text: &str) -> Result<Self> {
        let len = text.chars().count();
        let mut ones = vec![0u64; word_count(len)];
        let mut het = vec![0u64; word_count(len)];
        for (j, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => ones[word_of(j)] |= bit_of(j),
                '2' => het[word_of(j)] |= bit_of(j),
                _ => {
                    return Err(Error::parse(1, j + 1, format!("invalid genotype symbol {c:?}")));
                }
            }
        }
        if len == 0 {
            return Err(Error::parse(1, 1, "empty genotype"));
        }
        let het_count = het.iter().map(|w| w.count_ones()).sum();
        Ok(Genotype {
            ones,
            het,
            len,
            het_count,
        })
    }

    /// Conflates two haplotypes into the genotype they resolve.
    pub fn conflate(h: &Haplotype, k: &Haplotype) -> Result<Self> {
        check_len(h.len, k.len)?;
        let het: Vec<u64> = h.words.iter().zip(&k.words).map(|(a, b)| a ^ b).collect();
        let ones: Vec<u64> = h.words.iter().zip(&k.words).map(|(a, b)| a & b).collect();
        let het_count = het.iter().map(|w| w.count_ones()).sum();
        Ok(Genotype {
            ones,
            het,
            len: h.len,
            het_count,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Site value: 0, 1 or 2.
    pub fn value(&self, site: usize) -> u8 {
        debug_assert!(site < self.len);
        if self.het[word_of(site)] & bit_of(site) != 0 {
            2
        } else if self.ones[word_of(site)] & bit_of(site) != 0 {
            1
        } else {
            0
        }
    }

    /// 0-based indices of heterozygous sites.
    pub fn het_sites(&self) -> Vec<usize> {
        (0..self.len).filter(|&j| self.value(j) == 2).collect()
    }

    pub fn het_count(&self) -> u32 {
        self.het_count
    }

    /// Number of unordered haplotype pairs resolving this genotype:
    /// 2^(l-1) for l ≥ 1 heterozygous sites, 1 for the fully homozygous case
    /// (the unique pair ⟨g,g⟩).
    pub fn resolvent_pair_count(&self) -> u128 {
        let l = self.het_count;
        if l == 0 {
            1
        } else {
            1u128.checked_shl(l - 1).unwrap_or(u128::MAX)
        }
    }

    /// True iff the unordered pair ⟨h,k⟩ resolves this genotype: equal to g
    /// at homozygous sites, differing at heterozygous ones.
    pub fn resolved_by(&self, h: &Haplotype, k: &Haplotype) -> Result<bool> {
        check_len(self.len, h.len)?;
        check_len(self.len, k.len)?;
        for i in 0..self.het.len() {
            if h.words[i] ^ k.words[i] != self.het[i] {
                return Ok(false);
            }
            if (h.words[i] ^ self.ones[i]) & !self.het[i] != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff h can take part in a resolution of this genotype: h matches g
    /// at every homozygous site.
    pub fn compatible_hap(&self, h: &Haplotype) -> Result<bool> {
        check_len(self.len, h.len)?;
        Ok(self.first_mismatch(h).is_none())
    }

    fn first_mismatch(&self, h: &Haplotype) -> Option<usize> {
        for i in 0..self.het.len() {
            let bad = (h.words[i] ^ self.ones[i]) & !self.het[i];
            if bad != 0 {
                return Some(i * WORD_BITS + bad.leading_zeros() as usize);
            }
        }
        None
    }

    /// The unique partner haplotype k with ⟨h,k⟩ resolving this genotype.
    /// Errors when h is not compatible with the genotype.
    pub fn complement(&self, h: &Haplotype) -> Result<Haplotype> {
        check_len(self.len, h.len)?;
        if let Some(site) = self.first_mismatch(h) {
            return Err(Error::Incompatible { site: site + 1 });
        }
        Ok(h.xor_words(&self.het))
    }

    /// Genotype-genotype compatibility: a common resolving haplotype may
    /// exist, i.e. at every site the values are equal or either is 2.
    pub fn compatible_with(&self, other: &Genotype) -> Result<bool> {
        check_len(self.len, other.len)?;
        for i in 0..self.het.len() {
            if (self.ones[i] ^ other.ones[i]) & !self.het[i] & !other.het[i] != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The lexicographically smallest haplotype compatible with this
    /// genotype: homozygous values with 0 at every heterozygous site.
    pub fn min_compatible_hap(&self) -> Haplotype {
        Haplotype {
            words: self.ones.clone(),
            len: self.len,
        }
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            write!(f, "{}", self.value(j))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Genotype({self})")
    }
}

#[inline]
fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

/// A problem instance: n genotypes sharing m sites.
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    genotypes: Vec<Genotype>,
    m: usize,
}

impl Instance {
    pub fn new(genotypes: Vec<Genotype>) -> Result<Self> {
        let m = match genotypes.first() {
            Some(g) => g.len(),
            None => return Err(Error::EmptyInstance),
        };
        for g in &genotypes {
            check_len(m, g.len())?;
        }
        Ok(Instance { genotypes, m })
    }

    /// Convenience constructor from contiguous genotype strings.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Arc<Self>> {
        let genotypes = rows
            .iter()
            .map(|r| Genotype::parse(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(Instance::new(genotypes)?))
    }

    pub fn n(&self) -> usize {
        self.genotypes.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn genotype(&self, id: usize) -> &Genotype {
        &self.genotypes[id]
    }

    pub fn genotypes(&self) -> &[Genotype] {
        &self.genotypes
    }

    /// Ids of all genotypes compatible with h, ascending.
    pub fn compatible_set(&self, h: &Haplotype) -> Vec<usize> {
        self.genotypes
            .iter()
            .enumerate()
            .filter(|(_, g)| g.compatible_hap(h).unwrap_or(false))
            .map(|(i, _)| i)
            .collect()
    }

    /// |compatible_set(h)| without materializing it.
    pub fn compatible_count(&self, h: &Haplotype) -> u32 {
        self.genotypes
            .iter()
            .filter(|g| g.compatible_hap(h).unwrap_or(false))
            .count() as u32
    }

    /// Product of per-genotype resolvent pair counts, saturating.
    pub fn resolution_state_count(&self) -> u128 {
        self.genotypes
            .iter()
            .map(|g| g.resolvent_pair_count())
            .try_fold(1u128, |acc, c| acc.checked_mul(c))
            .unwrap_or(u128::MAX)
    }
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Instance(n={}, m={})", self.n(), self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> Haplotype {
        Haplotype::parse(s).unwrap()
    }

    fn g(s: &str) -> Genotype {
        Genotype::parse(s).unwrap()
    }

    #[test]
    fn resolution_examples() {
        assert!(g("0212").resolved_by(&h("0110"), &h("0011")).unwrap());
        assert!(g("00").resolved_by(&h("00"), &h("00")).unwrap());
        assert!(!g("02").resolved_by(&h("01"), &h("01")).unwrap());
    }

    #[test]
    fn resolution_is_symmetric() {
        let geno = g("0212");
        assert_eq!(
            geno.resolved_by(&h("0110"), &h("0011")).unwrap(),
            geno.resolved_by(&h("0011"), &h("0110")).unwrap()
        );
    }

    #[test]
    fn resolution_rejects_length_mismatch() {
        let err = g("0212").resolved_by(&h("011"), &h("0011")).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { expected: 4, found: 3 }));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(g("0212").complement(&h("0110")).unwrap(), h("0011"));
        assert_eq!(g("11").complement(&h("11")).unwrap(), h("11"));
        // the appendix worked example: r = g3 without a
        assert_eq!(g("1212122").complement(&h("1110110")).unwrap(), h("1011101"));
    }

    #[test]
    fn complement_rejects_incompatible() {
        let err = g("10").complement(&h("01")).unwrap_err();
        assert!(matches!(err, Error::Incompatible { site: 1 }));
    }

    #[test]
    fn haplotype_genotype_compatibility() {
        assert!(g("2210212").compatible_hap(&h("1110110")).unwrap());
        // homozygous-0 mismatch: g[3]=0 but h[3]=1
        assert!(!g("1102").compatible_hap(&h("1110")).unwrap());
        // an all-heterozygous genotype admits every haplotype
        assert!(g("22").compatible_hap(&h("01")).unwrap());
        assert!(g("22").compatible_hap(&h("10")).unwrap());
    }

    #[test]
    fn genotype_compatibility() {
        assert!(g("2210").compatible_with(&g("1220")).unwrap());
        assert!(!g("2210").compatible_with(&g("1102")).unwrap());
        for s in ["2210", "0000", "2222", "1102"] {
            assert!(g(s).compatible_with(&g(s)).unwrap());
        }
    }

    #[test]
    fn het_sites_examples() {
        assert_eq!(g("0212").het_sites(), vec![1, 3]); // sites 2 and 4, 1-based
        assert!(g("0000").het_sites().is_empty());
        assert_eq!(g("2222").het_sites(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn resolvent_pair_counts() {
        assert_eq!(g("0212").resolvent_pair_count(), 2);
        assert_eq!(g("0000").resolvent_pair_count(), 1);
        assert_eq!(g("2222").resolvent_pair_count(), 8);
    }

    #[test]
    fn pair_count_matches_enumeration() {
        // brute force over all unordered haplotype pairs, small m
        for s in ["0212", "2222", "0000", "21", "202", "121212"] {
            let geno = g(s);
            let m = geno.len();
            let mut count = 0u128;
            for a in 0u32..(1 << m) {
                for b in a..(1 << m) {
                    let ha = bits_to_hap(a, m);
                    let hb = bits_to_hap(b, m);
                    if geno.resolved_by(&ha, &hb).unwrap() {
                        count += 1;
                    }
                }
            }
            assert_eq!(count, geno.resolvent_pair_count(), "genotype {s}");
        }
    }

    fn bits_to_hap(bits: u32, m: usize) -> Haplotype {
        let mut hap = Haplotype::zeros(m);
        for j in 0..m {
            hap.set(j, bits >> j & 1 == 1);
        }
        hap
    }

    #[test]
    fn lexicographic_order_matches_strings() {
        let mut haps: Vec<Haplotype> = ["0110", "0011", "1110", "0000", "1111"]
            .iter()
            .map(|s| h(s))
            .collect();
        haps.sort();
        let sorted: Vec<String> = haps.iter().map(|x| x.to_string()).collect();
        assert_eq!(sorted, vec!["0000", "0011", "0110", "1110", "1111"]);
    }

    #[test]
    fn long_haplotypes_cross_word_boundaries() {
        let s: String = (0..130).map(|i| if i % 3 == 0 { '1' } else { '0' }).collect();
        let hap = h(&s);
        assert_eq!(hap.to_string(), s);
        let mut flipped = hap.clone();
        flipped.flip(127);
        assert!(flipped > hap); // site 128 flips 0 -> 1
        assert_eq!(flipped.flipped(127), hap);
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(Instance::new(vec![]), Err(Error::EmptyInstance)));
        let err = Instance::new(vec![g("0212"), g("2112110")]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn compatible_set_on_appendix_instance() {
        let inst =
            Instance::from_rows(&["2210212", "2112110", "1212122", "1222122", "1202201"]).unwrap();
        assert_eq!(inst.compatible_set(&h("1110110")), vec![0, 1, 2, 3]);
        assert_eq!(inst.compatible_set(&h("1101101")), vec![3, 4]);
        assert_eq!(inst.compatible_count(&h("1000001")), 1);
    }

    #[test]
    fn conflate_inverts_resolution() {
        let geno = Genotype::conflate(&h("0110"), &h("0011")).unwrap();
        assert_eq!(geno, g("0212"));
        assert_eq!(Genotype::conflate(&h("00"), &h("00")).unwrap(), g("00"));
    }
}
