//! Batch runs for genome cohorts.
//!
//! Two experiments are supported. In the reference experiment every cohort
//! sequence is paired with one fixed reference and the expected direction is
//! reference → sequence. In the candidate experiment every cohort sequence is
//! paired with two candidate sources; only the causal strengths are kept and
//! the two strength samples are compared with a trimmed-mean bootstrap-t.
//!
//! Pairwise runs execute on the current rayon pool and are collected in
//! cohort order, so output never depends on the thread count.

use std::collections::{BTreeMap, BTreeSet};

use ccm_causal_core::causal::{evaluate_profiles, Profile};
use ccm_causal_core::rng::{derive_seed, seeded, DetRng};
use ccm_causal_core::sequence::encode_nucleotides;
use ccm_causal_core::stats::{yuen_bootstrap_t, TrimmedComparison};
use ccm_causal_core::{CausalConfig, CausalVerdict, Direction, Model, SymbolicSequence};
use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formats::FastaRecord;

/// Group assigned to every sequence when no manifest is given.
pub const DEFAULT_GROUP: &str = "all";

#[derive(Debug, Clone, PartialEq)]
pub struct CohortMember {
    pub id: String,
    pub group: String,
    pub sequence: SymbolicSequence,
}

/// A cohort record that was left out of the analysis, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub sequence_id: String,
    pub reason: String,
}

/// Encodes FASTA records into cohort members.
///
/// Records with ambiguous nucleotides, ids repeated in the file, or ids
/// missing from `groups` are rejected rather than failing the batch. Without
/// a manifest every member belongs to [`DEFAULT_GROUP`].
pub fn encode_cohort(
    records: &[FastaRecord],
    groups: Option<&BTreeMap<String, String>>,
) -> (Vec<CohortMember>, Vec<Reject>) {
    let mut members = Vec::with_capacity(records.len());
    let mut rejects = Vec::new();
    let mut seen = BTreeSet::new();
    for r in records {
        let reject = |reason: String| Reject { sequence_id: r.id.clone(), reason };
        if !seen.insert(r.id.as_str()) {
            rejects.push(reject("duplicate sequence id".into()));
            continue;
        }
        let group = match groups {
            None => DEFAULT_GROUP.to_owned(),
            Some(g) => match g.get(&r.id) {
                Some(g) => g.clone(),
                None => {
                    rejects.push(reject("not listed in manifest".into()));
                    continue;
                }
            },
        };
        match encode_nucleotides(&r.sequence) {
            Ok(sequence) => members.push(CohortMember { id: r.id.clone(), group, sequence }),
            Err(e) => rejects.push(reject(e.to_string())),
        }
    }
    (members, rejects)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRunRecord {
    pub reference_id: String,
    pub sequence_id: String,
    pub group: String,
    /// One per model, in the order the models were requested.
    pub verdicts: Vec<CausalVerdict>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRun {
    pub records: Vec<PairRunRecord>,
    /// Cohort members identical to the reference, left out.
    pub skipped: Vec<String>,
}

/// Pairs every cohort member with the reference as `(x = reference, y =
/// member)`. The reference is compressed once and shared by all pairs.
///
/// Members identical to the reference cannot be scored; they are skipped
/// and logged. An empty retained cohort is an error.
pub fn run_reference_experiment(
    reference_id: &str,
    reference: &SymbolicSequence,
    cohort: &[CohortMember],
    models: &[Model],
    cfg: &CausalConfig,
) -> Result<ReferenceRun> {
    check_models(models)?;
    let (kept, skipped) = split_identical(cohort, &[reference]);
    if kept.is_empty() {
        return Err(invalid("no cohort sequence left to analyse"));
    }
    let reference_profile = Profile::new(reference.clone(), models);
    let records = kept
        .par_iter()
        .map(|m| {
            let profile = Profile::new(m.sequence.clone(), models);
            Ok(PairRunRecord {
                reference_id: reference_id.to_owned(),
                sequence_id: m.id.clone(),
                group: m.group.clone(),
                verdicts: evaluate_profiles(models, &reference_profile, &profile, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReferenceRun { records, skipped })
}

fn check_models(models: &[Model]) -> Result<()> {
    if models.is_empty() {
        return Err(invalid("no models selected"));
    }
    Ok(())
}

fn invalid(what: &'static str) -> crate::Error {
    ccm_causal_core::Error::InvalidParameter(what).into()
}

fn split_identical<'a>(
    cohort: &'a [CohortMember],
    against: &[&SymbolicSequence],
) -> (Vec<&'a CohortMember>, Vec<String>) {
    let mut kept = Vec::with_capacity(cohort.len());
    let mut skipped = Vec::new();
    for m in cohort {
        if against.iter().any(|s| s.symbols() == m.sequence.symbols()) {
            log::warn!("skipping {}: identical to a source sequence", m.id);
            skipped.push(m.id.clone());
        } else {
            kept.push(m);
        }
    }
    (kept, skipped)
}

/// One row of the records CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub reference_id: String,
    pub sequence_id: String,
    pub group: String,
    pub model: Model,
    pub direction: Direction,
    pub score_xy: f64,
    pub score_yx: f64,
    pub strength: f64,
}

/// Flattens records to one row per (record, model).
pub fn record_rows(records: &[PairRunRecord]) -> Vec<RecordRow> {
    records
        .iter()
        .flat_map(|r| {
            r.verdicts.iter().map(move |v| RecordRow {
                reference_id: r.reference_id.clone(),
                sequence_id: r.sequence_id.clone(),
                group: r.group.clone(),
                model: v.model,
                direction: v.direction,
                score_xy: v.score_xy,
                score_yx: v.score_yx,
                strength: v.strength,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionReport {
    pub group: String,
    pub model: Model,
    pub n: usize,
    /// Records inferred reference → sequence.
    pub expected: usize,
    pub proportion: f64,
}

impl ProportionReport {
    /// Whether at least `fraction` of the group supports the expected
    /// direction (e.g. 0.05 for a 5% reporting cut-off).
    pub fn admits(&self, fraction: f64) -> bool {
        self.proportion >= fraction
    }
}

/// Per (group, model) share of records inferred in the expected direction.
/// Undecided verdicts count as not expected. Groups are sorted; models keep
/// the order they have in the records.
pub fn proportions(records: &[PairRunRecord]) -> Vec<ProportionReport> {
    let mut cells: BTreeMap<(&str, usize), (Model, usize, usize)> = BTreeMap::new();
    for r in records {
        for (k, v) in r.verdicts.iter().enumerate() {
            let cell = cells.entry((r.group.as_str(), k)).or_insert((v.model, 0, 0));
            cell.1 += 1;
            if v.direction == Direction::XtoY {
                cell.2 += 1;
            }
        }
    }
    cells
        .into_iter()
        .map(|((group, _), (model, n, expected))| ProportionReport {
            group: group.to_owned(),
            model,
            n,
            expected,
            proportion: expected as f64 / n as f64,
        })
        .collect()
}

/// Causal strengths of one cohort member against both candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrengthPair {
    pub sequence_id: String,
    pub group: String,
    pub model: Model,
    pub strength_a: f64,
    pub strength_b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateRun {
    /// One per (retained member, model), member-major.
    pub pairs: Vec<StrengthPair>,
    /// Cohort members identical to a candidate, left out.
    pub skipped: Vec<String>,
}

/// Scores every cohort member against both candidates, ignoring direction.
/// Members identical to either candidate are skipped and logged.
pub fn run_candidate_experiment(
    candidate_a: &SymbolicSequence,
    candidate_b: &SymbolicSequence,
    cohort: &[CohortMember],
    models: &[Model],
    cfg: &CausalConfig,
) -> Result<CandidateRun> {
    check_models(models)?;
    if candidate_a.symbols() == candidate_b.symbols() {
        return Err(invalid("candidate sequences must differ"));
    }
    let (kept, skipped) = split_identical(cohort, &[candidate_a, candidate_b]);
    if kept.is_empty() {
        return Err(invalid("no cohort sequence left to analyse"));
    }
    let pa = Profile::new(candidate_a.clone(), models);
    let pb = Profile::new(candidate_b.clone(), models);
    let per_member = kept
        .par_iter()
        .map(|m| {
            let pm = Profile::new(m.sequence.clone(), models);
            let va = evaluate_profiles(models, &pa, &pm, cfg)?;
            let vb = evaluate_profiles(models, &pb, &pm, cfg)?;
            Ok(va
                .iter()
                .zip(&vb)
                .map(|(a, b)| StrengthPair {
                    sequence_id: m.id.clone(),
                    group: m.group.clone(),
                    model: a.model,
                    strength_a: a.strength,
                    strength_b: b.strength,
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CandidateRun { pairs: per_member.into_iter().flatten().collect(), skipped })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateComparison {
    pub model: Model,
    pub n: usize,
    /// Trimmed mean of strengths against a minus that against b.
    #[serde(flatten)]
    pub comparison: TrimmedComparison,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapSettings {
    pub trim: f64,
    pub iterations: u32,
    pub confidence: f64,
    pub seed: u64,
}

impl Default for BootstrapSettings {
    fn default() -> Self {
        Self { trim: 0.2, iterations: 5000, confidence: 0.95, seed: 0 }
    }
}

/// Yuen bootstrap-t comparison of the a- and b-strengths for each model
/// present in `pairs`, in order of first appearance. Each model draws from a
/// seed derived from its identity, so the result for one model does not
/// depend on which other models were run.
pub fn compare_candidates(pairs: &[StrengthPair], settings: &BootstrapSettings) -> Result<Vec<CandidateComparison>> {
    let mut order: Vec<Model> = Vec::new();
    for p in pairs {
        if !order.contains(&p.model) {
            order.push(p.model);
        }
    }
    order
        .into_iter()
        .map(|model| {
            let (a, b): (Vec<f64>, Vec<f64>) =
                pairs.iter().filter(|p| p.model == model).map(|p| (p.strength_a, p.strength_b)).unzip();
            let slot = Model::ALL.iter().position(|&m| m == model).expect("listed") as u32;
            let comparison = yuen_bootstrap_t(
                &a,
                &b,
                settings.trim,
                settings.iterations,
                settings.confidence,
                derive_seed(settings.seed, slot, 0),
            )?;
            Ok(CandidateComparison { model, n: a.len(), comparison })
        })
        .collect()
}

const BASES: [char; 4] = ['A', 'C', 'G', 'T'];

/// Uniform random ACGT text.
pub fn random_nucleotides(len: usize, rng: &mut DetRng) -> String {
    (0..len).map(|_| BASES[rng.random_range(0..4)]).collect()
}

/// Substitutes `k` distinct positions of an ACGT text, each with one of the
/// three other bases chosen uniformly.
pub fn point_substitutions(seq: &str, k: usize, rng: &mut DetRng) -> Result<String> {
    let mut bases: Vec<char> = seq.chars().collect();
    if k > bases.len() {
        return Err(invalid("more substitutions than positions"));
    }
    let mut positions = index::sample(rng, bases.len(), k).into_vec();
    positions.sort_unstable();
    for p in positions {
        let old = BASES
            .iter()
            .position(|&b| b == bases[p])
            .ok_or(ccm_causal_core::Error::AmbiguousNucleotide { position: p, found: bases[p] })?;
        bases[p] = BASES[(old + rng.random_range(1..4)) % 4];
    }
    Ok(bases.into_iter().collect())
}

/// `members` mutants of `reference`, each with `substitutions` point
/// substitutions, as FASTA records `mut0000`, `mut0001`, ... Mutant `i`
/// draws from its own stream derived from `seed`.
pub fn synthetic_cohort(reference: &str, members: u32, substitutions: usize, seed: u64) -> Result<Vec<FastaRecord>> {
    (0..members)
        .map(|i| {
            let mut rng = seeded(derive_seed(seed, 1, i));
            Ok(FastaRecord {
                id: format!("mut{i:04}"),
                sequence: point_substitutions(reference, substitutions, &mut rng)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn member(id: &str, group: &str, text: &str) -> CohortMember {
        CohortMember { id: id.into(), group: group.into(), sequence: encode_nucleotides(text).unwrap() }
    }

    fn verdict(model: Model, direction: Direction) -> CausalVerdict {
        CausalVerdict { model, direction, score_xy: 0.0, score_yx: 0.0, strength: 0.0 }
    }

    fn record(group: &str, dirs: &[Direction]) -> PairRunRecord {
        PairRunRecord {
            reference_id: "ref".into(),
            sequence_id: "s".into(),
            group: group.into(),
            verdicts: dirs.iter().zip(Model::ALL).map(|(&d, m)| verdict(m, d)).collect(),
        }
    }

    #[test]
    fn encode_rejects_bad_records() {
        let recs = vec![
            FastaRecord { id: "a".into(), sequence: "acgt".into() },
            FastaRecord { id: "b".into(), sequence: "ACNT".into() },
            FastaRecord { id: "a".into(), sequence: "AAAA".into() },
            FastaRecord { id: "c".into(), sequence: "AAAA".into() },
        ];
        let manifest: BTreeMap<_, _> = [("a", "X"), ("b", "Y")].map(|(k, v)| (k.to_owned(), v.to_owned())).into();
        let (members, rejects) = encode_cohort(&recs, Some(&manifest));
        assert_eq!(members.len(), 1);
        assert_eq!((members[0].id.as_str(), members[0].group.as_str()), ("a", "X"));
        let ids: Vec<_> = rejects.iter().map(|r| r.sequence_id.as_str()).collect();
        assert_eq!(ids, ["b", "a", "c"]);
        assert!(rejects[0].reason.contains("ambiguous"));

        let (members, rejects) = encode_cohort(&recs[3..], None);
        assert_eq!((members[0].group.as_str(), rejects.len()), (DEFAULT_GROUP, 0));
    }

    #[test]
    fn one_member_three_models() {
        let r = encode_nucleotides("ACGTACGTTTGACCA").unwrap();
        let run = run_reference_experiment(
            "r",
            &r,
            &[member("s", "g", "ACGTACGATTGACCA")],
            &Model::ALL,
            &CausalConfig::default(),
        )
        .unwrap();
        assert_eq!(run.records.len(), 1);
        assert_eq!(run.records[0].verdicts.len(), 3);
        assert_eq!(record_rows(&run.records).len(), 3);
    }

    #[test]
    fn reference_copy_is_skipped() {
        let text = "ACGTACGTTTGACCA";
        let r = encode_nucleotides(text).unwrap();
        let cohort = [member("same", "g", text), member("other", "g", "ACGTACCTTTGACCA")];
        let run = run_reference_experiment("r", &r, &cohort, &[Model::LzPenalty], &CausalConfig::default()).unwrap();
        assert_eq!(run.skipped, ["same"]);
        assert_eq!(run.records.len(), 1);
        assert!(run_reference_experiment("r", &r, &cohort[..1], &[Model::LzPenalty], &CausalConfig::default()).is_err());
    }

    #[test]
    fn proportion_conventions() {
        use Direction::*;
        let all_expected = [record("g", &[XtoY, XtoY, XtoY])];
        assert!(proportions(&all_expected).iter().all(|p| p.proportion == 1.0));
        let undecided = [record("g", &[Undecided; 3])];
        assert!(proportions(&undecided).iter().all(|p| p.proportion == 0.0));
        let mixed = [record("g", &[XtoY]), record("g", &[XtoY]), record("g", &[YtoX]), record("g", &[XtoY])];
        let p = proportions(&mixed);
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].n, p[0].expected, p[0].proportion), (4, 3, 0.75));
        assert!(p[0].admits(0.05));
    }

    #[test]
    fn proportions_grouped_and_sorted() {
        use Direction::*;
        let recs = [record("b", &[XtoY, YtoX]), record("a", &[YtoX, XtoY]), record("b", &[YtoX, XtoY])];
        let p = proportions(&recs);
        let keys: Vec<_> = p.iter().map(|p| (p.group.as_str(), p.model, p.expected, p.n)).collect();
        assert_eq!(
            keys,
            [
                ("a", Model::EtcPenalty, 0, 1),
                ("a", Model::EtcEfficacy, 1, 1),
                ("b", Model::EtcPenalty, 1, 2),
                ("b", Model::EtcEfficacy, 1, 2)
            ]
        );
    }

    #[test]
    fn candidate_shape_and_preconditions() {
        let a = encode_nucleotides("ACGTTGCAACGTAGCT").unwrap();
        let b = encode_nucleotides("TTGCAACGGCATGCAA").unwrap();
        let cohort = [member("s1", "g", "TTGCAACGGCATGCAT"), member("s2", "g", "TAGCAACGGCATGCAA")];
        let run = run_candidate_experiment(&a, &b, &cohort, &Model::ALL, &CausalConfig::default()).unwrap();
        assert_eq!((run.pairs.len(), run.skipped.len()), (6, 0));
        let with_copy = [member("copy", "g", "ACGTTGCAACGTAGCT"), cohort[0].clone()];
        let run = run_candidate_experiment(&a, &b, &with_copy, &Model::ALL, &CausalConfig::default()).unwrap();
        assert_eq!((run.pairs.len(), run.skipped), (3, vec!["copy".to_owned()]));
        assert!(run_candidate_experiment(&a, &a, &cohort, &Model::ALL, &CausalConfig::default()).is_err());
    }

    #[test]
    fn substitutions_change_exactly_k_sites() {
        let mut rng = seeded(3);
        let r = random_nucleotides(500, &mut rng);
        let m = point_substitutions(&r, 30, &mut rng).unwrap();
        let diff = r.chars().zip(m.chars()).filter(|(x, y)| x != y).count();
        assert_eq!((m.len(), diff), (500, 30));
        assert!(point_substitutions(&r, 501, &mut rng).is_err());
    }

    #[test]
    fn synthetic_cohort_is_seeded() {
        let r = random_nucleotides(100, &mut seeded(1));
        let c = synthetic_cohort(&r, 3, 5, 9).unwrap();
        assert_eq!(c, synthetic_cohort(&r, 3, 5, 9).unwrap());
        assert_ne!(c, synthetic_cohort(&r, 3, 5, 10).unwrap());
        assert_eq!(c[2].id, "mut0002");
    }

    #[test]
    fn comparison_per_model() {
        let pairs: Vec<StrengthPair> = (0..20)
            .flat_map(|i| {
                Model::ALL.map(|model| StrengthPair {
                    sequence_id: format!("s{i}"),
                    group: "g".into(),
                    model,
                    strength_a: 10.0 + (i % 7) as f64,
                    strength_b: (i % 5) as f64,
                })
            })
            .collect();
        let s = BootstrapSettings { iterations: 500, ..BootstrapSettings::default() };
        let all = compare_candidates(&pairs, &s).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all.iter().all(|c| c.comparison.excludes_zero() && c.n == 20));
        let lz_only: Vec<_> = pairs.iter().filter(|p| p.model == Model::LzPenalty).cloned().collect();
        assert_eq!(compare_candidates(&lz_only, &s).unwrap()[0], all[2]);
    }
}
