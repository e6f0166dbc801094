//! Relation records: one per pair (forest, admissible word), carrying the
//! image polynomial, the induced MZV relation and its verification status.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{enumerate_forests, Forest};
use crate::mzvnum::{MzvEvaluator, PrecisionContext, Verdict};
use crate::rational::to_pq;
use crate::stuffle::{KawashimaSpace, Membership};
use crate::treemap::TreeMaps;
use crate::words::{MzvIndex, Poly, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Exact,
    Numeric,
    Both,
    None,
}

impl VerifyMode {
    pub fn exact(self) -> bool {
        matches!(self, VerifyMode::Exact | VerifyMode::Both)
    }

    pub fn numeric(self) -> bool {
        matches!(self, VerifyMode::Numeric | VerifyMode::Both)
    }
}

impl FromStr for VerifyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(VerifyMode::Exact),
            "numeric" => Ok(VerifyMode::Numeric),
            "both" => Ok(VerifyMode::Both),
            "none" => Ok(VerifyMode::None),
            _ => Err(Error::parse(0, format!("unknown verification mode {s:?}"))),
        }
    }
}

impl fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerifyMode::Exact => "exact",
            VerifyMode::Numeric => "numeric",
            VerifyMode::Both => "both",
            VerifyMode::None => "none",
        })
    }
}

/// A relation `Z(f(w)) = 0`, serialized as one JSON object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationRecord {
    pub forest: String,
    pub source_word: String,
    pub source_index: MzvIndex,
    /// `("p/q", word)` pairs.
    pub image_poly: Vec<(String, String)>,
    /// `("p/q", index)` pairs; the constant word never occurs.
    pub index_combination: Vec<(String, MzvIndex)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_verified: Option<bool>,
    /// `("(u,v)", "p/q")` generator coefficients when exactly verified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric_residual: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric_error_bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric_verdict: Option<String>,
}

impl RelationRecord {
    /// Whether any requested verification did not succeed.
    pub fn failed(&self) -> bool {
        self.exact_verified == Some(false) || self.numeric_verdict.as_deref().is_some_and(|v| v != "vanishes")
    }

    /// The relation in `ζ` notation, e.g. `-ζ(3) + ζ(2,1) = 0`.
    pub fn relation_text(&self) -> String {
        if self.index_combination.is_empty() {
            return "0 = 0".into();
        }
        let mut s = String::new();
        for (i, (c, idx)) in self.index_combination.iter().enumerate() {
            let (neg, mag) = match c.strip_prefix('-') {
                Some(m) => (true, m),
                None => (false, c.as_str()),
            };
            let mag = mag.strip_suffix("/1").unwrap_or(mag);
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if mag != "1" {
                s.push_str(mag);
            }
            s.push_str(&format!("ζ({idx})"));
        }
        s.push_str(" = 0");
        s
    }
}

/// Every `(f, w)` with `1 ≤ deg f ≤ max_degree` and `w` admissible of
/// weight `2..=max_weight`, forests outermost, both in canonical order.
pub fn relation_tasks(max_degree: usize, max_weight: usize) -> Vec<(Forest, Word)> {
    let words: Vec<Word> = (2..=max_weight).flat_map(Word::admissible_of_weight).collect();
    let mut out = Vec::new();
    for d in 1..=max_degree {
        for f in enumerate_forests(d) {
            out.extend(words.iter().map(|w| (f.clone(), *w)));
        }
    }
    out
}

/// Builds relation records; shareable across threads.
pub struct RelationBuilder<'a> {
    engine: &'a TreeMaps,
    evaluator: MzvEvaluator,
    mode: VerifyMode,
    tolerance: f64,
}

impl<'a> RelationBuilder<'a> {
    pub fn new(engine: &'a TreeMaps, mode: VerifyMode, ctx: PrecisionContext, tolerance: f64) -> Self {
        RelationBuilder { engine, evaluator: MzvEvaluator::new(ctx), mode, tolerance }
    }

    pub fn record(&self, f: &Forest, w: &Word) -> Result<RelationRecord> {
        if f.is_unit() {
            return Err(Error::domain("relations need a nonempty forest"));
        }
        let source_index = MzvIndex::from_word(w)?;
        if !source_index.is_admissible() {
            return Err(Error::NotAdmissible(source_index.to_string()));
        }
        let image = self.engine.apply(f, &Poly::from_word(*w));
        let index_combination = image
            .iter()
            .map(|(u, c)| {
                let idx = MzvIndex::from_word(u)?;
                if !idx.is_admissible() {
                    return Err(Error::NotAdmissible(idx.to_string()));
                }
                Ok((to_pq(c), idx))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut rec = RelationRecord {
            forest: f.to_string(),
            source_word: w.to_string(),
            source_index,
            image_poly: image.to_pairs(),
            index_combination,
            exact_verified: None,
            certificate: None,
            numeric_residual: None,
            numeric_error_bound: None,
            numeric_verdict: None,
        };
        if self.mode.exact() {
            let space = KawashimaSpace::cached(w.weight() + f.degree());
            match space.member(&image)? {
                Membership::Member(cert) => {
                    rec.exact_verified = Some(true);
                    rec.certificate = Some(cert.to_pairs());
                }
                Membership::NotMember { .. } => rec.exact_verified = Some(false),
            }
        }
        if self.mode.numeric() {
            let chk = self.evaluator.verify_kernel(self.engine, f, w, self.tolerance)?;
            rec.numeric_residual = Some(chk.residual.to_sci());
            rec.numeric_error_bound = Some(format!("{:.3e}", chk.residual.error_bound));
            rec.numeric_verdict = Some(
                match chk.verdict {
                    Verdict::Vanishes => "vanishes",
                    Verdict::NonZero => "nonzero",
                    Verdict::Inconclusive => "inconclusive",
                }
                .into(),
            );
        }
        Ok(rec)
    }
}

/// All records for the given bounds, sequentially.
pub fn generate(
    max_degree: usize,
    max_weight: usize,
    mode: VerifyMode,
    ctx: PrecisionContext,
    tolerance: f64,
) -> Result<Vec<RelationRecord>> {
    let builder = RelationBuilder::new(TreeMaps::global(), mode, ctx, tolerance);
    relation_tasks(max_degree, max_weight).iter().map(|(f, w)| builder.record(f, w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_record() {
        let recs = generate(1, 2, VerifyMode::Both, PrecisionContext::default(), 1e-25).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.forest, "[]");
        assert_eq!(r.source_word, "xy");
        assert_eq!(r.source_index.to_string(), "2");
        assert_eq!(r.relation_text(), "-ζ(3) + ζ(2,1) = 0");
        assert_eq!(r.exact_verified, Some(true));
        assert_eq!(r.numeric_verdict.as_deref(), Some("vanishes"));
        assert!(!r.failed());
        let residual: f64 = r.numeric_residual.as_ref().unwrap().parse().unwrap();
        assert!(residual.abs() < 1e-25);
    }

    #[test]
    fn unverified_records_omit_fields() {
        let recs = generate(1, 2, VerifyMode::None, PrecisionContext::default(), 1e-25).unwrap();
        let r = &recs[0];
        assert!(r.exact_verified.is_none() && r.numeric_residual.is_none() && r.certificate.is_none());
        assert!(!r.failed());
    }

    #[test]
    fn task_order_is_deterministic() {
        let t = relation_tasks(2, 3);
        let text: Vec<String> = t.iter().map(|(f, w)| format!("{f} {w}")).collect();
        assert_eq!(text, ["[] xy", "[] xxy", "[] xyy", "[]*[] xy", "[]*[] xxy", "[]*[] xyy", "[[]] xy", "[[]] xxy", "[[]] xyy"]);
    }

    #[test]
    fn mode_parsing() {
        for m in [VerifyMode::Exact, VerifyMode::Numeric, VerifyMode::Both, VerifyMode::None] {
            assert_eq!(m.to_string().parse::<VerifyMode>().unwrap(), m);
        }
        assert!("sometimes".parse::<VerifyMode>().is_err());
    }

    #[test]
    fn all_exact_to_weight_six() {
        let recs = generate(3, 6, VerifyMode::Exact, PrecisionContext::default(), 1e-25).unwrap();
        assert_eq!(recs.len(), 7 * 31);
        assert!(recs.iter().all(|r| r.exact_verified == Some(true)));
    }
}
