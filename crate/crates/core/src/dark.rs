//! Universal decompositions of `x^α y^α` and `[x^α, y^β]` in `F_2 = ⟨x, y⟩`
//! as ordered products of commutator words with binomial exponents.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::ring::{binomial, Ring};
use crate::tensor::{magnus_word, word_valuation};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DarkVariant {
    /// `x^α y^α = ∏_{r ≥ 0} θ(r)^{C(α,r)}`.
    Product,
    /// `[x^α, y^β] = ∏_{r,s ≥ 1} θ(r,s)^{C(α,r) C(β,s)}`, factors in lex order.
    Commutator,
}

impl std::str::FromStr for DarkVariant {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "product" => Ok(DarkVariant::Product),
            "commutator" => Ok(DarkVariant::Commutator),
            other => Err(crate::Error::InvalidParameter(format!("unknown variant {other:?}"))),
        }
    }
}

impl fmt::Display for DarkVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DarkVariant::Product => "product",
            DarkVariant::Commutator => "commutator",
        })
    }
}

/// Table of `θ` words. Product entries are keyed `(r, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarkTable {
    variant: DarkVariant,
    r_max: usize,
    entries: BTreeMap<(usize, usize), Word>,
}

fn x() -> Word {
    Word::from_signed(2, &[1]).expect("rank 2")
}

fn y() -> Word {
    Word::from_signed(2, &[2]).expect("rank 2")
}

fn coeff(a: usize, r: usize) -> i64 {
    binomial(a as u64, r as u64) as i64
}

impl DarkTable {
    fn build(variant: DarkVariant, r_max: usize) -> Self {
        let mut entries = BTreeMap::new();
        match variant {
            DarkVariant::Product => {
                entries.insert((0, 0), Word::identity(2));
                for a in 1..=r_max {
                    let mut lower = Word::identity(2);
                    for r in 0..a {
                        lower = lower.mul_unchecked(&entries[&(r, 0)].pow(coeff(a, r)));
                    }
                    let target = x().pow(a as i64).mul_unchecked(&y().pow(a as i64));
                    entries.insert((a, 0), lower.inverse().mul_unchecked(&target));
                }
            }
            DarkVariant::Commutator => {
                for a in 1..=r_max {
                    for b in 1..=r_max {
                        let mut lower = Word::identity(2);
                        for r in 1..=a {
                            for s in 1..=b {
                                if (r, s) == (a, b) {
                                    continue;
                                }
                                let e = coeff(a, r) * coeff(b, s);
                                lower = lower.mul_unchecked(&entries[&(r, s)].pow(e));
                            }
                        }
                        let target = Word::commutator(&x().pow(a as i64), &y().pow(b as i64)).expect("rank 2");
                        entries.insert((a, b), lower.inverse().mul_unchecked(&target));
                    }
                }
            }
        }
        DarkTable { variant, r_max, entries }
    }

    pub fn variant(&self) -> DarkVariant {
        self.variant
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    /// `θ(r)` of the product table.
    pub fn theta(&self, r: usize) -> Option<&Word> {
        match self.variant {
            DarkVariant::Product => self.entries.get(&(r, 0)),
            DarkVariant::Commutator => None,
        }
    }

    /// `θ(r, s)` of the commutator table.
    pub fn theta2(&self, r: usize, s: usize) -> Option<&Word> {
        match self.variant {
            DarkVariant::Commutator => self.entries.get(&(r, s)),
            DarkVariant::Product => None,
        }
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Word> {
        &self.entries
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: BTreeMap<String, String> = self
            .entries
            .iter()
            .map(|(&(r, s), w)| {
                let key = match self.variant {
                    DarkVariant::Product => format!("{r}"),
                    DarkVariant::Commutator => format!("{r},{s}"),
                };
                (key, format_xy(w))
            })
            .collect();
        serde_json::json!({ "variant": self.variant, "r_max": self.r_max, "entries": entries })
    }
}

/// Renders a rank-2 word with letters `x`, `y`.
pub fn format_xy(w: &Word) -> String {
    if w.is_identity() {
        return "1".into();
    }
    w.letters()
        .iter()
        .map(|l| {
            let g = if l.generator() == 1 { "x" } else { "y" };
            if l.is_inverse() { format!("{g}^-1") } else { g.to_string() }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

type Cache = Mutex<HashMap<(DarkVariant, usize), Arc<DarkTable>>>;

/// Memoized table construction, safe to call from several threads.
pub fn dark_table(variant: DarkVariant, r_max: usize) -> Arc<DarkTable> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache lock").get(&(variant, r_max)) {
        return Arc::clone(t);
    }
    let table = Arc::new(DarkTable::build(variant, r_max.max(1)));
    cache.lock().expect("cache lock").entry((variant, r_max)).or_insert(table).clone()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DarkFailure {
    /// The identity fails at these exponents.
    Identity { alpha: usize, beta: usize },
    /// `θ` at this index has too small a Magnus valuation or wrong bidegree.
    Depth { r: usize, s: usize },
    /// The table does not reach the requested exponents.
    Coverage { needed: usize, available: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DarkReport {
    pub variant: DarkVariant,
    pub alpha_max: usize,
    pub beta_max: usize,
    pub identities_checked: usize,
    pub depth_checks: usize,
    pub first_failure: Option<DarkFailure>,
}

impl DarkReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks the defining identities by word reduction, and that each `θ` lies
/// deep enough in the lower central series (via its Magnus expansion).
/// `beta_max` is ignored for the product variant.
pub fn verify_dark(table: &DarkTable, alpha_max: usize, beta_max: usize) -> DarkReport {
    let beta_max = match table.variant {
        DarkVariant::Product => 0,
        DarkVariant::Commutator => beta_max,
    };
    let mut report = DarkReport {
        variant: table.variant,
        alpha_max,
        beta_max,
        identities_checked: 0,
        depth_checks: 0,
        first_failure: None,
    };
    let needed = alpha_max.max(beta_max);
    if needed > table.r_max {
        report.first_failure = Some(DarkFailure::Coverage { needed, available: table.r_max });
        return report;
    }
    match table.variant {
        DarkVariant::Product => {
            for a in 1..=alpha_max {
                let mut prod = Word::identity(2);
                for r in 0..=a {
                    prod = prod.mul_unchecked(&table.entries[&(r, 0)].pow(coeff(a, r)));
                }
                report.identities_checked += 1;
                let target = x().pow(a as i64).mul_unchecked(&y().pow(a as i64));
                if prod != target && report.first_failure.is_none() {
                    report.first_failure = Some(DarkFailure::Identity { alpha: a, beta: 0 });
                }
            }
            for r in 2..=alpha_max {
                report.depth_checks += 1;
                let v = word_valuation(&table.entries[&(r, 0)], Ring::Integers, r);
                if !v.is_at_least(r) && report.first_failure.is_none() {
                    report.first_failure = Some(DarkFailure::Depth { r, s: 0 });
                }
            }
        }
        DarkVariant::Commutator => {
            for a in 1..=alpha_max {
                for b in 1..=beta_max {
                    let mut prod = Word::identity(2);
                    for r in 1..=a {
                        for s in 1..=b {
                            prod = prod.mul_unchecked(&table.entries[&(r, s)].pow(coeff(a, r) * coeff(b, s)));
                        }
                    }
                    report.identities_checked += 1;
                    let target = Word::commutator(&x().pow(a as i64), &y().pow(b as i64)).expect("rank 2");
                    if prod != target && report.first_failure.is_none() {
                        report.first_failure = Some(DarkFailure::Identity { alpha: a, beta: b });
                    }
                }
            }
            for r in 1..=alpha_max {
                for s in 1..=beta_max {
                    report.depth_checks += 1;
                    if !commutator_entry_deep_enough(&table.entries[&(r, s)], r, s) && report.first_failure.is_none() {
                        report.first_failure = Some(DarkFailure::Depth { r, s });
                    }
                }
            }
        }
    }
    report
}

/// `θ(r,s) - 1` has no Magnus terms below degree `r + s`, and in degree
/// `r + s` every monomial has exactly `r` letters `X` and `s` letters `Y`.
fn commutator_entry_deep_enough(w: &Word, r: usize, s: usize) -> bool {
    let d = r + s;
    if !word_valuation(w, Ring::Integers, d).is_at_least(d) {
        return false;
    }
    magnus_word(w, d, Ring::Integers)
        .graded_component(d)
        .terms()
        .keys()
        .all(|m| m.iter().filter(|&&g| g == 0).count() == r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_entries() {
        let t = dark_table(DarkVariant::Product, 5);
        assert!(t.theta(0).unwrap().is_identity());
        assert_eq!(format_xy(t.theta(1).unwrap()), "x y");
        // (xy)^-2 x^2 y^2, reduced by hand.
        assert_eq!(t.theta(2).unwrap(), &Word::from_signed(2, &[-2, -1, -2, 1, 2, 2]).unwrap());
        let rep = verify_dark(&t, 5, 0);
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.identities_checked, 5);
    }

    #[test]
    fn commutator_entries() {
        let t = dark_table(DarkVariant::Commutator, 4);
        assert_eq!(t.theta2(1, 1).unwrap(), &Word::commutator(&x(), &y()).unwrap());
        let rep = verify_dark(&t, 4, 4);
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.identities_checked, 16);
        let one = verify_dark(&t, 1, 1);
        assert!(one.holds());
        assert_eq!(one.identities_checked, 1);
    }

    #[test]
    fn coverage_and_corruption() {
        let t = dark_table(DarkVariant::Product, 2);
        assert!(matches!(verify_dark(&t, 3, 0).first_failure, Some(DarkFailure::Coverage { .. })));
        let mut bad = (*dark_table(DarkVariant::Product, 3)).clone();
        bad.entries.insert((2, 0), Word::commutator(&x(), &y()).unwrap());
        assert_eq!(verify_dark(&bad, 3, 0).first_failure, Some(DarkFailure::Identity { alpha: 2, beta: 0 }));
    }

    #[test]
    fn memoized() {
        let a = dark_table(DarkVariant::Commutator, 2);
        let b = dark_table(DarkVariant::Commutator, 2);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
