//! An explicit injection `Av_n(A_{k,k-1}) -> Av_n(A_{k,k})`.
//!
//! In a permutation avoiding `A_{k,k-1}`, every entry from the leftmost
//! entry of rank `k - 1` onwards has rank exactly `k - 1`, so that suffix is
//! decreasing. Reversing it makes it increasing, which avoids `A_{k,k}`.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{avoiders, count_avoiders, projected_nodes, DEFAULT_WARN_NODES};
use crate::error::{Error, Result};
use crate::perm::{avoids_all, family_a_ki, ranks, Permutation};

fn check_k(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("injection needs k >= 3, got {k}")));
    }
    Ok(())
}

/// The map `f`: reverse the suffix starting at the leftmost entry of rank
/// `k - 1`; permutations without such an entry are fixed.
pub fn inject(p: &Permutation, k: usize) -> Result<Permutation> {
    check_k(k)?;
    if !avoids_all(p, &family_a_ki(k, k - 1)?) {
        return Err(Error::NotInClass(format!("{p} (Av(A({k},{})))", k - 1)));
    }
    let rank = ranks(p.entries());
    let target = (k - 1) as u32;
    if let Some(high) = rank.iter().position(|&r| r > target) {
        return Err(Error::StructureViolation(format!(
            "{p} has an entry of rank {} > {target} at position {}",
            rank[high],
            high + 1
        )));
    }
    let Some(start) = rank.iter().position(|&r| r == target) else {
        return Ok(p.clone());
    };
    if p.entries()[start..].windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::StructureViolation(format!(
            "{p}: suffix from position {} is not decreasing",
            start + 1
        )));
    }
    Ok(p.reverse_suffix(start))
}

/// The unique candidate preimage of `r` under [`inject`], if it exists.
///
/// The candidate reverses `r` from the single rank-`(k-1)` entry of its
/// maximal increasing suffix. Since `f` is not onto, the candidate is kept
/// only if it avoids `A_{k,k-1}` and maps back to `r`.
pub fn preimage(r: &Permutation, k: usize) -> Result<Option<Permutation>> {
    check_k(k)?;
    if !avoids_all(r, &family_a_ki(k, k)?) {
        return Err(Error::NotInClass(format!("{r} (Av(A({k},{k})))")));
    }
    let rank = ranks(r.entries());
    let target = (k - 1) as u32;
    let candidate = if rank.contains(&target) {
        let e = r.entries();
        let mut suffix_start = e.len();
        while suffix_start > 0 && (suffix_start == e.len() || e[suffix_start - 1] < e[suffix_start]) {
            suffix_start -= 1;
        }
        let mut in_suffix = (suffix_start..e.len()).filter(|&j| rank[j] == target);
        match (in_suffix.next(), in_suffix.next()) {
            (Some(x), None) => r.reverse_suffix(x),
            _ => return Ok(None),
        }
    } else {
        r.clone()
    };
    if !avoids_all(&candidate, &family_a_ki(k, k - 1)?) {
        return Ok(None);
    }
    Ok(match inject(&candidate, k) {
        Ok(image) if image == *r => Some(candidate),
        _ => None,
    })
}

/// A concrete counterexample found by [`verify_injection`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectionWitness {
    pub check: String,
    pub permutation: Permutation,
    pub other: Option<Permutation>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectionReport {
    pub k: usize,
    pub n: usize,
    /// `av_n(A_{k,k-1})`
    pub domain_size: u64,
    /// `av_n(A_{k,k})`
    pub codomain_size: u64,
    pub images_distinct: bool,
    pub images_in_codomain: bool,
    pub left_inverse: bool,
    pub count_inequality: bool,
    pub witnesses: Vec<InjectionWitness>,
}

impl InjectionReport {
    pub fn passed(&self) -> bool {
        self.images_distinct && self.images_in_codomain && self.left_inverse && self.count_inequality
    }
}

/// Applies [`inject`] to all of `Av_n(A_{k,k-1})` and checks injectivity,
/// that images avoid `A_{k,k}`, that [`preimage`] undoes it, and the
/// resulting count inequality. Witnesses are the lexicographically first
/// failure of each check.
pub fn verify_injection(k: usize, n: usize) -> Result<InjectionReport> {
    check_k(k)?;
    if n < 1 {
        return Err(Error::InvalidParameter("injection check needs n >= 1".into()));
    }
    let domain_set = family_a_ki(k, k - 1)?;
    let codomain_set = family_a_ki(k, k)?;
    if projected_nodes(&domain_set, n) > DEFAULT_WARN_NODES {
        log::warn!("verifying the injection at k = {k}, n = {n} enumerates a very large class");
    }
    let domain = avoiders(&domain_set, n);
    let codomain_size = count_avoiders(&codomain_set, n).terms[n]
        .to_u64()
        .expect("an enumerable class fits in u64");

    let outcomes: Vec<(Permutation, Result<Permutation>, Option<Permutation>)> = domain
        .par_iter()
        .map(|p| {
            let image = inject(p, k);
            let back = match &image {
                Ok(img) if avoids_all(img, &codomain_set) => preimage(img, k).ok().flatten(),
                _ => None,
            };
            (p.clone(), image, back)
        })
        .collect();

    let mut witnesses = Vec::new();
    let mut images_in_codomain = true;
    let mut left_inverse = true;
    let mut first_source: HashMap<&Permutation, &Permutation> = HashMap::new();
    let mut images_distinct = true;
    for (p, image, back) in &outcomes {
        match image {
            Err(e) => {
                if images_in_codomain {
                    witnesses.push(InjectionWitness {
                        check: "images_in_codomain".into(),
                        permutation: p.clone(),
                        other: None,
                        detail: e.to_string(),
                    });
                }
                images_in_codomain = false;
            }
            Ok(img) => {
                if images_in_codomain && !avoids_all(img, &codomain_set) {
                    images_in_codomain = false;
                    witnesses.push(InjectionWitness {
                        check: "images_in_codomain".into(),
                        permutation: p.clone(),
                        other: Some(img.clone()),
                        detail: "image contains a pattern of A(k,k)".into(),
                    });
                }
                if let Some(earlier) = first_source.insert(img, p) {
                    if images_distinct {
                        witnesses.push(InjectionWitness {
                            check: "images_distinct".into(),
                            permutation: p.clone(),
                            other: Some(earlier.clone()),
                            detail: format!("both map to {img}"),
                        });
                    }
                    images_distinct = false;
                }
            }
        }
        if back.as_ref() != Some(p) {
            if left_inverse {
                witnesses.push(InjectionWitness {
                    check: "left_inverse".into(),
                    permutation: p.clone(),
                    other: back.clone(),
                    detail: "preimage of the image is not the original".into(),
                });
            }
            left_inverse = false;
        }
    }

    let domain_size = domain.len() as u64;
    Ok(InjectionReport {
        k,
        n,
        domain_size,
        codomain_size,
        images_distinct,
        images_in_codomain,
        left_inverse,
        count_inequality: domain_size <= codomain_size,
        witnesses,
    })
}
