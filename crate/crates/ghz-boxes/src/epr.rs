//! The reality-criterion machinery: deterministic pair rules, the property
//! distributions they force, and the exhaustive refutation of per-box hidden
//! assignments.
//!
//! The reality criterion is applied mechanically: whenever
//! [`predict_remaining`] returns [`Prediction::Certain`] for a box that was
//! not touched, the box is credited with that outcome as a possessed
//! property. Pooling is counterfactual — every pairing is evaluated against
//! the same uncollapsed state, never by collapsing a shared ensemble.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::boxbasis::{Basis, Label};
use crate::entangler::ghz_state;
use crate::error::{Error, Result};
use crate::measurement::{
    measure_collapse, outcome_probabilities, predict_remaining, MeasurementRecord, Prediction,
};
use crate::qstate::{BoxId, BoxState, AMPLITUDE_TOLERANCE};

/// The three box pairings, each with the left-out box: (i, j, third).
const PAIRINGS: [(BoxId, BoxId, BoxId); 3] = [
    (BoxId::A, BoxId::B, BoxId::C),
    (BoxId::A, BoxId::C, BoxId::B),
    (BoxId::B, BoxId::C, BoxId::A),
];

/// One row of a pair rule: an ordered joint outcome on the measured pair and
/// the certain outcome it forces on the third box. `prediction` is `None`
/// when the joint outcome has probability zero (an unreachable row).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuleRow {
    pub pair_outcome: (Label, Label),
    pub prediction: Option<Label>,
    pub joint_probability: f64,
}

/// Reduced two-row view of a total pair rule: the forced outcome depends
/// only on whether the measured pair agreed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SameDifferentTable {
    pub same: Label,
    pub different: Label,
}

/// Deterministic map from a two-box joint outcome to the certain outcome of
/// the third box. Valid for every choice of the measured pair (the state's
/// box symmetry is checked during derivation).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRule {
    pub measured_basis: Basis,
    pub target_basis: Basis,
    /// Four ordered rows: (first, first), (first, second), (second, first),
    /// (second, second) in measured-basis label order.
    pub rows: Vec<RuleRow>,
}

impl PairRule {
    /// Forced third-box outcome for a joint outcome, if reachable.
    pub fn lookup(&self, first: Label, second: Label) -> Option<Label> {
        self.rows
            .iter()
            .find(|row| row.pair_outcome == (first, second))
            .and_then(|row| row.prediction)
    }

    /// True when every joint outcome is reachable and forces an outcome.
    pub fn is_total(&self) -> bool {
        self.rows.iter().all(|row| row.prediction.is_some())
    }

    /// Collapses the four rows to a same/different table. Fails when a row
    /// is unreachable or rows with equal pair parity disagree.
    pub fn same_different_table(&self) -> Result<SameDifferentTable> {
        let labels = self.measured_basis.labels();
        let entry = |a: Label, b: Label| -> Result<Label> {
            self.lookup(a, b).ok_or_else(|| {
                Error::NoRule(format!(
                    "joint outcome ({a}, {b}) in the {} basis is unreachable",
                    self.measured_basis
                ))
            })
        };
        let same_first = entry(labels[0], labels[0])?;
        let same_second = entry(labels[1], labels[1])?;
        if same_first != same_second {
            return Err(Error::NoRule(format!(
                "equal pairs disagree: ({0}, {0}) forces {1} but ({2}, {2}) forces {3}",
                labels[0], same_first, labels[1], same_second
            )));
        }
        let diff_first = entry(labels[0], labels[1])?;
        let diff_second = entry(labels[1], labels[0])?;
        if diff_first != diff_second {
            return Err(Error::NoRule(format!(
                "unequal pairs disagree: {diff_first} vs {diff_second}"
            )));
        }
        Ok(SameDifferentTable {
            same: same_first,
            different: diff_first,
        })
    }
}

fn rule_rows_for_pairing(
    state: &BoxState,
    first_box: BoxId,
    second_box: BoxId,
    third_box: BoxId,
    measured_basis: Basis,
    target_basis: Basis,
    allow_unreachable: bool,
) -> Result<Vec<RuleRow>> {
    let labels = measured_basis.labels();
    let first_probs = outcome_probabilities(state, first_box, measured_basis)?;
    let mut rows = Vec::with_capacity(4);
    for &first in &labels {
        let p_first = first_probs[&first];
        let after_first = if p_first > AMPLITUDE_TOLERANCE {
            Some(measure_collapse(state, first_box, measured_basis, first)?)
        } else {
            None
        };
        for &second in &labels {
            let joint_probability = match &after_first {
                Some(collapsed) => {
                    p_first * outcome_probabilities(collapsed, second_box, measured_basis)?[&second]
                }
                None => 0.0,
            };
            let prediction = if joint_probability <= AMPLITUDE_TOLERANCE {
                if !allow_unreachable {
                    return Err(Error::NoRule(format!(
                        "joint outcome ({first}, {second}) on boxes {first_box}, {second_box} has probability zero"
                    )));
                }
                None
            } else {
                let records = [
                    MeasurementRecord::new(first_box, measured_basis, first),
                    MeasurementRecord::new(second_box, measured_basis, second),
                ];
                match predict_remaining(state, &records, third_box, target_basis)? {
                    Prediction::Certain(label) => Some(label),
                    Prediction::Probabilistic(map) => {
                        return Err(Error::NoRule(format!(
                            "outcome ({first}, {second}) on boxes {first_box}, {second_box} leaves box {third_box} undetermined: {map:?}"
                        )))
                    }
                }
            };
            rows.push(RuleRow {
                pair_outcome: (first, second),
                prediction,
                joint_probability,
            });
        }
    }
    Ok(rows)
}

fn derive_rule(
    state: &BoxState,
    measured_basis: Basis,
    target_basis: Basis,
    allow_unreachable: bool,
) -> Result<PairRule> {
    if state.n_boxes() != 3 {
        return Err(Error::BoxOutOfRange {
            id: BoxId::C,
            n_boxes: state.n_boxes(),
        });
    }
    let mut reference: Option<Vec<RuleRow>> = None;
    for (first_box, second_box, third_box) in PAIRINGS {
        let rows = rule_rows_for_pairing(
            state,
            first_box,
            second_box,
            third_box,
            measured_basis,
            target_basis,
            allow_unreachable,
        )?;
        match &reference {
            None => reference = Some(rows),
            Some(existing) => {
                let agree = existing
                    .iter()
                    .zip(&rows)
                    .all(|(a, b)| a.pair_outcome == b.pair_outcome && a.prediction == b.prediction);
                if !agree {
                    return Err(Error::AsymmetricRule(format!(
                        "pairing ({first_box}, {second_box}) -> {third_box} disagrees with ({}, {}) -> {}",
                        PAIRINGS[0].0, PAIRINGS[0].1, PAIRINGS[0].2
                    )));
                }
            }
        }
    }
    Ok(PairRule {
        measured_basis,
        target_basis,
        rows: reference.expect("three pairings"),
    })
}

/// Derives the deterministic pair rule for measuring two boxes in
/// `measured_basis` and reading off the third in `target_basis`.
///
/// Every joint outcome must be reachable and force a certain outcome, and
/// the rule must be identical for all three choices of the measured pair.
pub fn derive_pair_rule(
    state: &BoxState,
    measured_basis: Basis,
    target_basis: Basis,
) -> Result<PairRule> {
    derive_rule(state, measured_basis, target_basis, false)
}

/// Like [`derive_pair_rule`] but keeps probability-zero joint outcomes as
/// unreachable rows instead of failing. Useful for diagnostics such as the
/// phase-basis table, where the cross outcomes never occur.
pub fn derive_pair_rule_partial(
    state: &BoxState,
    measured_basis: Basis,
    target_basis: Basis,
) -> Result<PairRule> {
    derive_rule(state, measured_basis, target_basis, true)
}

/// One row of the mixed rule: bonding on one box plus position on another
/// forces the bonding of the third.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedRuleRow {
    pub bonding_outcome: Label,
    pub position_outcome: Label,
    pub prediction: Label,
    pub joint_probability: f64,
}

/// Deterministic map (bonding of one box, position of another) -> bonding of
/// the third, identical across all six ordered role choices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedRule {
    pub rows: Vec<MixedRuleRow>,
}

impl MixedRule {
    pub fn lookup(&self, bonding: Label, position: Label) -> Option<Label> {
        self.rows
            .iter()
            .find(|row| row.bonding_outcome == bonding && row.position_outcome == position)
            .map(|row| row.prediction)
    }
}

/// Derives the mixed bonding/position rule from the state, checking all six
/// ordered choices of (bonding box, position box) -> target box.
pub fn derive_mixed_rule(state: &BoxState) -> Result<MixedRule> {
    if state.n_boxes() != 3 {
        return Err(Error::BoxOutOfRange {
            id: BoxId::C,
            n_boxes: state.n_boxes(),
        });
    }
    let bonding_labels = Basis::Bonding.labels();
    let position_labels = Basis::Position.labels();
    let mut reference: Option<Vec<MixedRuleRow>> = None;
    for (bonding_box, position_box, target_box) in ordered_role_choices() {
        let bonding_probs = outcome_probabilities(state, bonding_box, Basis::Bonding)?;
        let mut rows = Vec::with_capacity(4);
        for &bonding in &bonding_labels {
            let p_bonding = bonding_probs[&bonding];
            let collapsed = measure_collapse(state, bonding_box, Basis::Bonding, bonding)?;
            for &position in &position_labels {
                let joint_probability = p_bonding
                    * outcome_probabilities(&collapsed, position_box, Basis::Position)?[&position];
                if joint_probability <= AMPLITUDE_TOLERANCE {
                    return Err(Error::NoRule(format!(
                        "mixed outcome ({bonding}, {position}) has probability zero"
                    )));
                }
                let records = [
                    MeasurementRecord::new(bonding_box, Basis::Bonding, bonding),
                    MeasurementRecord::new(position_box, Basis::Position, position),
                ];
                let prediction =
                    match predict_remaining(state, &records, target_box, Basis::Bonding)? {
                        Prediction::Certain(label) => label,
                        Prediction::Probabilistic(map) => {
                            return Err(Error::NoRule(format!(
                                "mixed outcome ({bonding}, {position}) leaves box {target_box} undetermined: {map:?}"
                            )))
                        }
                    };
                rows.push(MixedRuleRow {
                    bonding_outcome: bonding,
                    position_outcome: position,
                    prediction,
                    joint_probability,
                });
            }
        }
        match &reference {
            None => reference = Some(rows),
            Some(existing) => {
                let agree = existing.iter().zip(&rows).all(|(a, b)| {
                    a.bonding_outcome == b.bonding_outcome
                        && a.position_outcome == b.position_outcome
                        && a.prediction == b.prediction
                });
                if !agree {
                    return Err(Error::AsymmetricRule(format!(
                        "mixed rule differs for roles ({bonding_box}, {position_box}) -> {target_box}"
                    )));
                }
            }
        }
    }
    Ok(MixedRule {
        rows: reference.expect("six role choices"),
    })
}

/// All six ordered (bonding box, position box, target box) role choices.
fn ordered_role_choices() -> Vec<(BoxId, BoxId, BoxId)> {
    let mut out = Vec::with_capacity(6);
    for bonding_box in BoxId::ALL {
        for position_box in BoxId::ALL {
            if bonding_box == position_box {
                continue;
            }
            let target = BoxId::ALL
                .into_iter()
                .find(|b| *b != bonding_box && *b != position_box)
                .expect("three boxes");
            out.push((bonding_box, position_box, target));
        }
    }
    out
}

/// A full assignment of one target-basis label to each of the three boxes,
/// e.g. `LLR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertyDistribution(pub [Label; 3]);

impl fmt::Display for PropertyDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for label in self.0 {
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

impl Serialize for PropertyDistribution {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Enumerates all `2^3` assignments of measured-side labels, applies the
/// rule to each of the three pairings, and collects the implied third-box
/// distributions. Requires a total rule.
pub fn reality_distributions(rule: &PairRule) -> Result<BTreeSet<PropertyDistribution>> {
    if !rule.is_total() {
        return Err(Error::NoRule(
            "reality distributions need a total rule (no unreachable rows)".to_string(),
        ));
    }
    let labels = rule.measured_basis.labels();
    let mut out = BTreeSet::new();
    for index in 0..8usize {
        let measured = [
            labels[(index >> 2) & 1],
            labels[(index >> 1) & 1],
            labels[index & 1],
        ];
        // Box k inherits the outcome forced by the pair that excludes it.
        let implied = [
            rule.lookup(measured[1], measured[2]).expect("total rule"),
            rule.lookup(measured[0], measured[2]).expect("total rule"),
            rule.lookup(measured[0], measured[1]).expect("total rule"),
        ];
        out.insert(PropertyDistribution(implied));
    }
    Ok(out)
}

/// True when the two distribution sets cannot both hold: their intersection
/// is empty.
pub fn contradiction_check(
    a: &BTreeSet<PropertyDistribution>,
    b: &BTreeSet<PropertyDistribution>,
) -> bool {
    a.intersection(b).next().is_none()
}

/// Position and bonding values carried by one box in a candidate hidden
/// assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BoxReality {
    pub position: Label,
    pub bonding: Label,
}

/// A candidate "element of physical reality" record: every box carries a
/// definite position and a definite bonding value, independent of what is
/// measured elsewhere (separability and locality are baked into the shape).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HiddenAssignment {
    pub boxes: [BoxReality; 3],
}

impl HiddenAssignment {
    /// All 4^3 = 64 assignments in deterministic order (box A varies
    /// slowest; within a box, position varies before bonding).
    pub fn enumerate_all() -> Vec<HiddenAssignment> {
        let positions = Basis::Position.labels();
        let bondings = Basis::Bonding.labels();
        let mut out = Vec::with_capacity(64);
        let per_box: Vec<BoxReality> = positions
            .iter()
            .flat_map(|&position| {
                bondings
                    .iter()
                    .map(move |&bonding| BoxReality { position, bonding })
            })
            .collect();
        for &a in &per_box {
            for &b in &per_box {
                for &c in &per_box {
                    out.push(HiddenAssignment { boxes: [a, b, c] });
                }
            }
        }
        out
    }

    pub fn position_distribution(&self) -> PropertyDistribution {
        PropertyDistribution([
            self.boxes[0].position,
            self.boxes[1].position,
            self.boxes[2].position,
        ])
    }
}

impl fmt::Display for HiddenAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (id, reality) in BoxId::ALL.iter().zip(self.boxes) {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{id}:{}/{}", reality.position, reality.bonding)?;
            first = false;
        }
        Ok(())
    }
}

/// The constraint families an assignment must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintFamily {
    /// Two positions force the third position (3 pair choices).
    Position,
    /// Two bondings force the third position (3 pair choices).
    Bonding,
    /// One bonding and one position force the remaining bonding
    /// (6 ordered role choices).
    Mixed,
}

impl ConstraintFamily {
    pub const ALL: [ConstraintFamily; 3] = [
        ConstraintFamily::Position,
        ConstraintFamily::Bonding,
        ConstraintFamily::Mixed,
    ];
}

impl fmt::Display for ConstraintFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintFamily::Position => "position",
            ConstraintFamily::Bonding => "bonding",
            ConstraintFamily::Mixed => "mixed",
        })
    }
}

/// Scan verdict for one assignment: the enabled families it violates.
#[derive(Debug, Clone, Serialize)]
pub struct ScanOutcome {
    pub assignment: HiddenAssignment,
    pub violated: Vec<ConstraintFamily>,
}

/// Result of checking all 64 assignments against the derived rules.
#[derive(Debug, Clone, Serialize)]
pub struct LhvScan {
    pub families: Vec<ConstraintFamily>,
    pub total: usize,
    pub outcomes: Vec<ScanOutcome>,
}

impl LhvScan {
    pub fn survivors(&self) -> Vec<HiddenAssignment> {
        self.outcomes
            .iter()
            .filter(|o| o.violated.is_empty())
            .map(|o| o.assignment)
            .collect()
    }

    /// Number of assignments that violate `family` (an assignment may count
    /// toward several families).
    pub fn eliminated_by(&self, family: ConstraintFamily) -> usize {
        self.outcomes
            .iter()
            .filter(|o| o.violated.contains(&family))
            .count()
    }
}

/// The derived rule tables the scan checks against.
#[derive(Debug, Clone, Serialize)]
pub struct RuleSet {
    pub position: PairRule,
    pub bonding: PairRule,
    pub mixed: MixedRule,
}

impl RuleSet {
    /// Derives all three tables from a three-box state.
    pub fn derive(state: &BoxState) -> Result<RuleSet> {
        Ok(RuleSet {
            position: derive_pair_rule(state, Basis::Position, Basis::Position)?,
            bonding: derive_pair_rule(state, Basis::Bonding, Basis::Position)?,
            mixed: derive_mixed_rule(state)?,
        })
    }

    fn violates(&self, assignment: &HiddenAssignment, family: ConstraintFamily) -> bool {
        let boxes = &assignment.boxes;
        match family {
            ConstraintFamily::Position => PAIRINGS.iter().any(|&(i, j, k)| {
                self.position
                    .lookup(boxes[i.index()].position, boxes[j.index()].position)
                    != Some(boxes[k.index()].position)
            }),
            ConstraintFamily::Bonding => PAIRINGS.iter().any(|&(i, j, k)| {
                self.bonding
                    .lookup(boxes[i.index()].bonding, boxes[j.index()].bonding)
                    != Some(boxes[k.index()].position)
            }),
            ConstraintFamily::Mixed => ordered_role_choices().iter().any(|&(i, k, j)| {
                self.mixed
                    .lookup(boxes[i.index()].bonding, boxes[k.index()].position)
                    != Some(boxes[j.index()].bonding)
            }),
        }
    }
}

/// Checks every one of the 64 assignments against the enabled constraint
/// families, reporting per-assignment violations.
pub fn lhv_scan_with(families: &[ConstraintFamily]) -> Result<LhvScan> {
    let rules = RuleSet::derive(&ghz_state())?;
    let outcomes = HiddenAssignment::enumerate_all()
        .into_iter()
        .map(|assignment| {
            let violated = families
                .iter()
                .copied()
                .filter(|&family| rules.violates(&assignment, family))
                .collect();
            ScanOutcome {
                assignment,
                violated,
            }
        })
        .collect::<Vec<_>>();
    Ok(LhvScan {
        families: families.to_vec(),
        total: outcomes.len(),
        outcomes,
    })
}

/// Full scan with all three constraint families enabled. No assignment
/// survives.
pub fn lhv_scan() -> Result<LhvScan> {
    lhv_scan_with(&ConstraintFamily::ALL)
}

/// Algebraic summary of the clash, using the encoding `L = +1`, `R = -1`
/// for positions and `+1 / -1` for bondings.
#[derive(Debug, Clone, Serialize)]
pub struct ParityCertificate {
    /// Distributions forced by the position rule, with their position
    /// products (all -1).
    pub position_distributions: Vec<PropertyDistribution>,
    pub position_products: Vec<i32>,
    /// Distributions forced by the bonding rule, with their position
    /// products (all +1).
    pub bonding_distributions: Vec<PropertyDistribution>,
    pub bonding_products: Vec<i32>,
    /// Common sign of `p_i * p_j * p_k` over the position-rule rows: -1.
    pub position_rule_parity: i32,
    /// Common sign of `b_i * b_j * p_k` over the bonding-rule rows: +1.
    pub bonding_constraint_parity: i32,
    /// Multiplying the three cyclic bonding constraints squares out the
    /// bondings and forces `p_A * p_B * p_C` to this value: +1.
    pub forced_position_product: i32,
    /// True when the two forced products disagree and the distribution sets
    /// are disjoint.
    pub contradiction: bool,
    /// Case analysis behind the two distribution sets, spelled out.
    pub case_analysis: Vec<String>,
}

fn uniform_row_parity<I: Iterator<Item = i32>>(mut signs: I, what: &str) -> Result<i32> {
    let first = signs
        .next()
        .ok_or_else(|| Error::NoRule(format!("{what}: empty rule")))?;
    for sign in signs {
        if sign != first {
            return Err(Error::NoRule(format!("{what}: rows carry mixed parities")));
        }
    }
    Ok(first)
}

/// Builds the parity certificate from freshly derived rules.
pub fn parity_certificate() -> Result<ParityCertificate> {
    let state = ghz_state();
    let position_rule = derive_pair_rule(&state, Basis::Position, Basis::Position)?;
    let bonding_rule = derive_pair_rule(&state, Basis::Bonding, Basis::Position)?;

    let position_set = reality_distributions(&position_rule)?;
    let bonding_set = reality_distributions(&bonding_rule)?;

    let product = |d: &PropertyDistribution| d.0.iter().map(|l| l.sign()).product::<i32>();
    let position_distributions: Vec<_> = position_set.iter().copied().collect();
    let position_products: Vec<i32> = position_distributions.iter().map(product).collect();
    let bonding_distributions: Vec<_> = bonding_set.iter().copied().collect();
    let bonding_products: Vec<i32> = bonding_distributions.iter().map(product).collect();

    let position_rule_parity = uniform_row_parity(
        position_rule.rows.iter().map(|row| {
            row.pair_outcome.0.sign()
                * row.pair_outcome.1.sign()
                * row.prediction.expect("total rule").sign()
        }),
        "position rule",
    )?;
    let bonding_constraint_parity = uniform_row_parity(
        bonding_rule.rows.iter().map(|row| {
            row.pair_outcome.0.sign()
                * row.pair_outcome.1.sign()
                * row.prediction.expect("total rule").sign()
        }),
        "bonding rule",
    )?;
    // (b_A b_B p_C)(b_B b_C p_A)(b_A b_C p_B) = (b_A b_B b_C)^2 p_A p_B p_C
    let forced_position_product = bonding_constraint_parity.pow(3);

    let position_table = position_rule.same_different_table()?;
    let bonding_table = bonding_rule.same_different_table()?;
    let case_analysis = vec![
        format!(
            "position rule: three equal pairs force {0}{0}{0}; one equal pair with two unequal pairs forces two {1} and one {0}",
            position_table.same, position_table.different
        ),
        format!(
            "bonding rule: three equal pairs force {0}{0}{0}; one equal pair with two unequal pairs forces two {1} and one {0}",
            bonding_table.same, bonding_table.different
        ),
        format!(
            "with L=+1, R=-1 the position rule pins p_A*p_B*p_C = {position_rule_parity} while the three bonding constraints multiply to p_A*p_B*p_C = {forced_position_product}"
        ),
    ];

    let contradiction = contradiction_check(&position_set, &bonding_set)
        && position_rule_parity != forced_position_product;

    Ok(ParityCertificate {
        position_distributions,
        position_products,
        bonding_distributions,
        bonding_products,
        position_rule_parity,
        bonding_constraint_parity,
        forced_position_product,
        contradiction,
        case_analysis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn distribution(labels: [Label; 3]) -> PropertyDistribution {
        PropertyDistribution(labels)
    }

    fn set_4a() -> BTreeSet<PropertyDistribution> {
        BTreeSet::from([
            distribution([Label::L, Label::L, Label::R]),
            distribution([Label::L, Label::R, Label::L]),
            distribution([Label::R, Label::L, Label::L]),
            distribution([Label::R, Label::R, Label::R]),
        ])
    }

    fn set_4b() -> BTreeSet<PropertyDistribution> {
        BTreeSet::from([
            distribution([Label::R, Label::R, Label::L]),
            distribution([Label::R, Label::L, Label::R]),
            distribution([Label::L, Label::R, Label::R]),
            distribution([Label::L, Label::L, Label::L]),
        ])
    }

    #[test]
    fn position_rule_is_same_r_different_l() {
        let rule = derive_pair_rule(&ghz_state(), Basis::Position, Basis::Position).unwrap();
        assert!(rule.is_total());
        let table = rule.same_different_table().unwrap();
        assert_eq!(table.same, Label::R);
        assert_eq!(table.different, Label::L);
        for row in &rule.rows {
            assert!((row.joint_probability - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn bonding_rule_is_same_l_different_r() {
        let rule = derive_pair_rule(&ghz_state(), Basis::Bonding, Basis::Position).unwrap();
        let table = rule.same_different_table().unwrap();
        assert_eq!(table.same, Label::L);
        assert_eq!(table.different, Label::R);
    }

    #[test]
    fn phase_rule_is_partial() {
        let ghz = ghz_state();
        assert!(matches!(
            derive_pair_rule(&ghz, Basis::Phase, Basis::Phase),
            Err(Error::NoRule(_))
        ));
        let partial = derive_pair_rule_partial(&ghz, Basis::Phase, Basis::Phase).unwrap();
        assert_eq!(
            partial.lookup(Label::PlusI, Label::PlusI),
            Some(Label::PlusI)
        );
        assert_eq!(
            partial.lookup(Label::MinusI, Label::MinusI),
            Some(Label::MinusI)
        );
        assert_eq!(partial.lookup(Label::PlusI, Label::MinusI), None);
        assert_eq!(partial.lookup(Label::MinusI, Label::PlusI), None);
        // The two reachable rows disagree, so no same/different reduction.
        assert!(partial.same_different_table().is_err());
    }

    #[test]
    fn mixed_rule_table() {
        let rule = derive_mixed_rule(&ghz_state()).unwrap();
        assert_eq!(rule.lookup(Label::Plus, Label::L), Some(Label::Plus));
        assert_eq!(rule.lookup(Label::Plus, Label::R), Some(Label::Minus));
        assert_eq!(rule.lookup(Label::Minus, Label::L), Some(Label::Minus));
        assert_eq!(rule.lookup(Label::Minus, Label::R), Some(Label::Plus));
    }

    #[test]
    fn position_distributions_are_the_odd_r_triples() {
        let rule = derive_pair_rule(&ghz_state(), Basis::Position, Basis::Position).unwrap();
        let distributions = reality_distributions(&rule).unwrap();
        assert_eq!(distributions, set_4a());
        assert_eq!(distributions.len(), 4);
    }

    #[test]
    fn bonding_distributions_are_the_even_r_triples() {
        let rule = derive_pair_rule(&ghz_state(), Basis::Bonding, Basis::Position).unwrap();
        let distributions = reality_distributions(&rule).unwrap();
        assert_eq!(distributions, set_4b());
        assert_eq!(distributions.len(), 4);
    }

    #[test]
    fn constant_rule_forces_constant_distribution() {
        let rows = Basis::Position
            .labels()
            .iter()
            .flat_map(|&a| {
                Basis::Position.labels().map(move |b| RuleRow {
                    pair_outcome: (a, b),
                    prediction: Some(Label::L),
                    joint_probability: 0.25,
                })
            })
            .collect();
        let rule = PairRule {
            measured_basis: Basis::Position,
            target_basis: Basis::Position,
            rows,
        };
        let distributions = reality_distributions(&rule).unwrap();
        assert_eq!(
            distributions,
            BTreeSet::from([distribution([Label::L, Label::L, Label::L])])
        );
    }

    #[test]
    fn reality_distributions_reject_partial_rules() {
        let partial = derive_pair_rule_partial(&ghz_state(), Basis::Phase, Basis::Phase).unwrap();
        assert!(matches!(
            reality_distributions(&partial),
            Err(Error::NoRule(_))
        ));
    }

    #[test]
    fn contradiction_checks() {
        assert!(contradiction_check(&set_4a(), &set_4b()));
        assert!(!contradiction_check(&set_4a(), &set_4a()));
        let lll = BTreeSet::from([distribution([Label::L, Label::L, Label::L])]);
        let lll_rrr = BTreeSet::from([
            distribution([Label::L, Label::L, Label::L]),
            distribution([Label::R, Label::R, Label::R]),
        ]);
        assert!(!contradiction_check(&lll, &lll_rrr));
    }

    #[test]
    fn full_scan_leaves_no_survivors() {
        let scan = lhv_scan().unwrap();
        assert_eq!(scan.total, 64);
        assert!(scan.survivors().is_empty());
    }

    #[test]
    fn position_only_scan_keeps_position_side() {
        let scan = lhv_scan_with(&[ConstraintFamily::Position]).unwrap();
        let survivors = scan.survivors();
        // 4 allowed position distributions x 8 free bonding combinations.
        assert_eq!(survivors.len(), 32);
        for assignment in &survivors {
            assert!(set_4a().contains(&assignment.position_distribution()));
        }
    }

    #[test]
    fn bonding_only_scan_keeps_bonding_side() {
        let scan = lhv_scan_with(&[ConstraintFamily::Bonding]).unwrap();
        let survivors = scan.survivors();
        // The three bonding constraints fix all positions from the bondings:
        // one survivor per bonding combination.
        assert_eq!(survivors.len(), 8);
        for assignment in &survivors {
            assert!(set_4b().contains(&assignment.position_distribution()));
        }
    }

    #[test]
    fn mixed_only_scan_agrees_with_bonding_only() {
        // The six mixed constraints encode the same parity relations as the
        // three bonding-pair constraints.
        let mixed = lhv_scan_with(&[ConstraintFamily::Mixed]).unwrap();
        let bonding = lhv_scan_with(&[ConstraintFamily::Bonding]).unwrap();
        assert_eq!(mixed.survivors(), bonding.survivors());
    }

    #[test]
    fn scan_from_hand_frozen_tables_agrees() {
        // Independent check: apply the two rule tables and the mixed rule
        // as literal tables, without going through rule derivation.
        let same_r_different_l = |a: Label, b: Label| if a == b { Label::R } else { Label::L };
        let same_l_different_r = |a: Label, b: Label| if a == b { Label::L } else { Label::R };
        let mixed = |b: Label, p: Label| {
            if p == Label::L {
                b
            } else {
                b.flipped()
            }
        };
        let mut survivors_all = Vec::new();
        let mut survivors_position = 0usize;
        let mut survivors_bonding = 0usize;
        for assignment in HiddenAssignment::enumerate_all() {
            let boxes = &assignment.boxes;
            let pairs = [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)];
            let position_ok = pairs.iter().all(|&(i, j, k)| {
                same_r_different_l(boxes[i].position, boxes[j].position) == boxes[k].position
            });
            let bonding_ok = pairs.iter().all(|&(i, j, k)| {
                same_l_different_r(boxes[i].bonding, boxes[j].bonding) == boxes[k].position
            });
            let mixed_ok = pairs.iter().all(|&(i, j, k)| {
                mixed(boxes[i].bonding, boxes[k].position) == boxes[j].bonding
                    && mixed(boxes[j].bonding, boxes[k].position) == boxes[i].bonding
            });
            if position_ok {
                survivors_position += 1;
            }
            if bonding_ok {
                survivors_bonding += 1;
            }
            if position_ok && bonding_ok && mixed_ok {
                survivors_all.push(assignment);
            }
        }
        assert_eq!(survivors_all.len(), 0);
        assert_eq!(
            survivors_position,
            lhv_scan_with(&[ConstraintFamily::Position])
                .unwrap()
                .survivors()
                .len()
        );
        assert_eq!(
            survivors_bonding,
            lhv_scan_with(&[ConstraintFamily::Bonding])
                .unwrap()
                .survivors()
                .len()
        );
    }

    #[test]
    fn elimination_counts_cover_everything() {
        let scan = lhv_scan().unwrap();
        let eliminated_somewhere = scan
            .outcomes
            .iter()
            .filter(|o| !o.violated.is_empty())
            .count();
        assert_eq!(eliminated_somewhere, 64);
        assert!(scan.eliminated_by(ConstraintFamily::Position) > 0);
        assert!(scan.eliminated_by(ConstraintFamily::Bonding) > 0);
    }

    #[test]
    fn parity_certificate_reports_the_clash() {
        let certificate = parity_certificate().unwrap();
        assert!(certificate.contradiction);
        assert_eq!(certificate.position_rule_parity, -1);
        assert_eq!(certificate.bonding_constraint_parity, 1);
        assert_eq!(certificate.forced_position_product, 1);
        assert!(certificate.position_products.iter().all(|&p| p == -1));
        assert!(certificate.bonding_products.iter().all(|&p| p == 1));
        assert_eq!(certificate.position_distributions.len(), 4);
        assert_eq!(certificate.bonding_distributions.len(), 4);
    }

    #[test]
    fn enumeration_is_deterministic_and_complete() {
        let all = HiddenAssignment::enumerate_all();
        assert_eq!(all.len(), 64);
        let unique: BTreeSet<_> = all.iter().copied().collect();
        assert_eq!(unique.len(), 64);
        assert_eq!(all, HiddenAssignment::enumerate_all());
    }

    #[test]
    fn pair_rule_rejects_two_box_states() {
        let pair = crate::entangler::two_box_correlated();
        assert!(derive_pair_rule(&pair, Basis::Position, Basis::Position).is_err());
    }
}
