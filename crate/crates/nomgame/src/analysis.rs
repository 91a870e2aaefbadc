//! Comparative statics between the insider-only game and the outsider game:
//! winning-policy polarization, voter and party-R welfare effects, the
//! welfare-reduction conditions, parameter sweeps, and the voter-preference
//! region map over the (V, X) plane.

use crate::closed_form::{
    classify_outsider, solve_insider, solve_outsider, CaseLabel, EquilibriumOutcome,
};
use crate::model::{cmp_eps, ModelError, ModelParams, Party};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering::{Equal, Greater, Less};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EffectSign {
    Negative,
    Null,
    Positive,
}

impl fmt::Display for EffectSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EffectSign::Negative => "Negative",
            EffectSign::Null => "Null",
            EffectSign::Positive => "Positive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolarizationEffect {
    MoreCentrist,
    Unchanged,
    MoreExtreme,
}

impl fmt::Display for PolarizationEffect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolarizationEffect::MoreCentrist => "MoreCentrist",
            PolarizationEffect::Unchanged => "Unchanged",
            PolarizationEffect::MoreExtreme => "MoreExtreme",
        })
    }
}

/// Welfare-reduction condition tags. The voter tags name the equilibrium
/// case under which introducing the outsider strictly lowers median-voter
/// utility; the party tag marks the case-11 configuration in which the
/// nominating party's utility changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WelfareTag {
    #[serde(rename = "C-Case6")]
    VoterCase6,
    #[serde(rename = "C-Case9")]
    VoterCase9,
    #[serde(rename = "C-Case10")]
    VoterCase10,
    #[serde(rename = "C-Case11")]
    VoterCase11,
    #[serde(rename = "P-Case11")]
    PartyCase11,
}

impl fmt::Display for WelfareTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WelfareTag::VoterCase6 => "C-Case6",
            WelfareTag::VoterCase9 => "C-Case9",
            WelfareTag::VoterCase10 => "C-Case10",
            WelfareTag::VoterCase11 => "C-Case11",
            WelfareTag::PartyCase11 => "P-Case11",
        })
    }
}

/// Tags that fire for a parameter vector. The voter tags are mutually
/// exclusive; the party tag can coincide with the case-11 voter tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WelfareTags {
    pub voter: Option<WelfareTag>,
    pub party: Option<WelfareTag>,
}

/// Voter/party utility deltas between the insider-only game and the
/// outsider game, with sign classification.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WelfareComparison {
    pub u_median_insider: f64,
    pub u_median_outsider: f64,
    #[serde(rename = "u_partyR_insider")]
    pub u_party_r_insider: f64,
    #[serde(rename = "u_partyR_outsider")]
    pub u_party_r_outsider: f64,
    pub voter_effect: EffectSign,
    pub party_effect: EffectSign,
    pub polarization_effect: PolarizationEffect,
    pub cases: (CaseLabel, CaseLabel),
}

fn effect_sign(insider: f64, outsider: f64, tie_eps: f64) -> EffectSign {
    match cmp_eps(outsider, insider, tie_eps) {
        Greater => EffectSign::Positive,
        Less => EffectSign::Negative,
        Equal => EffectSign::Null,
    }
}

/// Solves both games and classifies the voter, party, and polarization
/// effects of introducing the outsider. Lottery outcomes enter through
/// expected utilities and expected absolute winning policy.
pub fn compare_games(params: &ModelParams, tie_eps: f64) -> Result<WelfareComparison, ModelError> {
    let insider = solve_insider(params, tie_eps);
    let outsider = solve_outsider(params, tie_eps)?;
    Ok(compare_outcomes(params, &insider, &outsider, tie_eps))
}

/// Comparison of two already-solved outcomes; exposed for sweeps that reuse
/// solved games.
pub fn compare_outcomes(
    params: &ModelParams,
    insider: &EquilibriumOutcome,
    outsider: &EquilibriumOutcome,
    tie_eps: f64,
) -> WelfareComparison {
    let u_median_insider = insider.result.expected_median_utility(params);
    let u_median_outsider = outsider.result.expected_median_utility(params);
    let u_party_r_insider = insider.result.expected_party_utility(Party::R, params);
    let u_party_r_outsider = outsider.result.expected_party_utility(Party::R, params);
    let pol_insider = insider.result.expected_abs_policy();
    let pol_outsider = outsider.result.expected_abs_policy();
    let polarization_effect = match cmp_eps(pol_outsider, pol_insider, tie_eps) {
        Greater => PolarizationEffect::MoreExtreme,
        Less => PolarizationEffect::MoreCentrist,
        Equal => PolarizationEffect::Unchanged,
    };
    WelfareComparison {
        u_median_insider,
        u_median_outsider,
        u_party_r_insider,
        u_party_r_outsider,
        voter_effect: effect_sign(u_median_insider, u_median_outsider, tie_eps),
        party_effect: effect_sign(u_party_r_insider, u_party_r_outsider, tie_eps),
        polarization_effect,
        cases: (insider.case, outsider.case),
    }
}

/// Evaluates the welfare-reduction conditions for the realized case.
///
/// The case-9 voter condition is `k_r < V_r < b_R` together with
/// `V_o < b_R - k_r + V_r`; for `V_o < b_R` the bound on `V_o` follows from
/// `k_r < V_r`, so the single condition covers both case-9 branches. The
/// case-10 condition `k_r < V_r` and `k_r < b_R` is the union of the four
/// strict orderings of `k_r, V_o, V_r, b_R` compatible with that case.
pub fn welfare_reduction_condition(
    params: &ModelParams,
    tie_eps: f64,
) -> Result<WelfareTags, ModelError> {
    let case = classify_outsider(params, tie_eps)?;
    let v_r = params.v_r();
    let v_o = params.v_o();
    let b_r = params.b_r;
    let k_r = params.k_r;
    let c = |a: f64, b: f64| cmp_eps(a, b, tie_eps);

    let voter = match case.index {
        6 => {
            let threshold =
                0.5 * (params.alpha_r * params.nu_r + params.alpha_l * params.nu_l) + 2.0 * b_r;
            (c(params.nu_o, threshold) == Less).then_some(WelfareTag::VoterCase6)
        }
        9 => (c(k_r, v_r) == Less && c(v_r, b_r) == Less && c(v_o, b_r - k_r + v_r) == Less)
            .then_some(WelfareTag::VoterCase9),
        10 => (c(k_r, v_r) == Less && c(k_r, b_r) == Less).then_some(WelfareTag::VoterCase10),
        11 => (c(k_r, b_r) == Less).then_some(WelfareTag::VoterCase11),
        _ => None,
    };
    let party = (case.index == 11 && c(k_r.min(v_r), b_r) != Equal).then_some(WelfareTag::PartyCase11);
    Ok(WelfareTags { voter, party })
}

/// Parameters a sweep axis may range over: any exogenous field, or the
/// derived advantages V_r / V_o (realized by solving for the corresponding
/// valence while holding the affect factors fixed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisParam {
    #[serde(rename = "b_L")]
    BL,
    #[serde(rename = "b_R")]
    BR,
    #[serde(rename = "alpha_L")]
    AlphaL,
    #[serde(rename = "alpha_R")]
    AlphaR,
    #[serde(rename = "k_l")]
    Kl,
    #[serde(rename = "k_r")]
    Kr,
    #[serde(rename = "k_o")]
    Ko,
    #[serde(rename = "nu_l")]
    NuL,
    #[serde(rename = "nu_r")]
    NuR,
    #[serde(rename = "nu_o")]
    NuO,
    #[serde(rename = "V_r")]
    Vr,
    #[serde(rename = "V_o")]
    Vo,
}

impl AxisParam {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "b_L" => AxisParam::BL,
            "b_R" => AxisParam::BR,
            "alpha_L" => AxisParam::AlphaL,
            "alpha_R" => AxisParam::AlphaR,
            "k_l" => AxisParam::Kl,
            "k_r" => AxisParam::Kr,
            "k_o" => AxisParam::Ko,
            "nu_l" => AxisParam::NuL,
            "nu_r" => AxisParam::NuR,
            "nu_o" => AxisParam::NuO,
            "V_r" => AxisParam::Vr,
            "V_o" => AxisParam::Vo,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            AxisParam::BL => "b_L",
            AxisParam::BR => "b_R",
            AxisParam::AlphaL => "alpha_L",
            AxisParam::AlphaR => "alpha_R",
            AxisParam::Kl => "k_l",
            AxisParam::Kr => "k_r",
            AxisParam::Ko => "k_o",
            AxisParam::NuL => "nu_l",
            AxisParam::NuR => "nu_r",
            AxisParam::NuO => "nu_o",
            AxisParam::Vr => "V_r",
            AxisParam::Vo => "V_o",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AxisSpec {
    pub param: AxisParam,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn value_at(&self, i: usize) -> f64 {
        if self.n <= 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
        }
    }
}

/// Applies an axis value to the template, inverting derived axes for the
/// underlying valence. Returns the reason when the cell is infeasible.
pub fn apply_axis(
    template: &ModelParams,
    param: AxisParam,
    value: f64,
) -> Result<ModelParams, String> {
    let mut p = *template;
    match param {
        AxisParam::BL => p.b_l = value,
        AxisParam::BR => p.b_r = value,
        AxisParam::AlphaL => p.alpha_l = value,
        AxisParam::AlphaR => p.alpha_r = value,
        AxisParam::Kl => p.k_l = value,
        AxisParam::Kr => p.k_r = value,
        AxisParam::Ko => p.k_o = value,
        AxisParam::NuL => p.nu_l = value,
        AxisParam::NuR => p.nu_r = value,
        AxisParam::NuO => p.nu_o = value,
        AxisParam::Vr => {
            if p.alpha_r <= 0.0 {
                return Err(format!("V_r = {value} unreachable with alpha_R = 0"));
            }
            let nu_r = (value + p.alpha_l * p.nu_l) / p.alpha_r;
            if nu_r < 0.0 {
                return Err(format!("V_r = {value} requires negative nu_r = {nu_r}"));
            }
            p.nu_r = nu_r;
        }
        AxisParam::Vo => {
            let nu_o = value + p.alpha_l * p.nu_l;
            if nu_o < 0.0 {
                return Err(format!("V_o = {value} requires negative nu_o = {nu_o}"));
            }
            p.nu_o = nu_o;
        }
    }
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

/// Per-cell record of a sweep: the outsider-game equilibrium summary plus
/// the welfare comparison, or the infeasibility reason.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Solved {
        axis1: f64,
        axis2: f64,
        comparison: WelfareComparison,
        winner: String,
        policy: f64,
        rent: f64,
        tags: WelfareTags,
    },
    Infeasible {
        axis1: f64,
        axis2: f64,
        reason: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionMap {
    pub axis1: AxisSpec,
    pub axis2: AxisSpec,
    pub cells: Vec<Cell>,
}

/// Evaluates `compare_games` over the grid of the two axes, row-major with
/// axis1 outermost. Cell evaluations are independent; assembly order is
/// deterministic.
pub fn sweep(
    template: &ModelParams,
    axis1: AxisSpec,
    axis2: AxisSpec,
    tie_eps: f64,
) -> RegionMap {
    let coords: Vec<(f64, f64)> = (0..axis1.n)
        .flat_map(|i| (0..axis2.n).map(move |j| (i, j)))
        .map(|(i, j)| (axis1.value_at(i), axis2.value_at(j)))
        .collect();
    let cells: Vec<Cell> = coords
        .par_iter()
        .map(|&(a1, a2)| {
            let params = apply_axis(template, axis1.param, a1)
                .and_then(|p| apply_axis(&p, axis2.param, a2));
            let params = match params {
                Ok(p) => p,
                Err(reason) => {
                    return Cell::Infeasible {
                        axis1: a1,
                        axis2: a2,
                        reason,
                    }
                }
            };
            let insider = solve_insider(&params, tie_eps);
            let outsider = match solve_outsider(&params, tie_eps) {
                Ok(o) => o,
                Err(e) => {
                    return Cell::Infeasible {
                        axis1: a1,
                        axis2: a2,
                        reason: e.to_string(),
                    }
                }
            };
            let comparison = compare_outcomes(&params, &insider, &outsider, tie_eps);
            let tags = welfare_reduction_condition(&params, tie_eps)
                .unwrap_or(WelfareTags { voter: None, party: None });
            Cell::Solved {
                axis1: a1,
                axis2: a2,
                winner: crate::oracle::winner_identity(&outsider.result),
                policy: outsider.winning_policy,
                rent: outsider.winning_rent,
                comparison,
                tags,
            }
        })
        .collect();
    RegionMap {
        axis1,
        axis2,
        cells,
    }
}

/// Median-voter preference over the (V, X) plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Preference {
    PrefersL,
    PrefersR,
    Indifferent,
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preference::PrefersL => "L",
            Preference::PrefersR => "R",
            Preference::Indifferent => "indifferent",
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegionCell {
    pub v: f64,
    pub x: f64,
    pub preference: Preference,
}

/// Classifies the preferred match across a window of the (V, X) plane:
/// X > V prefers L, X < V prefers R, and the diagonal is the indifference
/// set. Row-major with V outermost.
pub fn median_voter_indifference_region(
    v_lo: f64,
    v_hi: f64,
    x_lo: f64,
    x_hi: f64,
    resolution: usize,
    tie_eps: f64,
) -> Vec<RegionCell> {
    let n = resolution.max(2);
    let lerp = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        let v = lerp(v_lo, v_hi, i);
        for j in 0..n {
            let x = lerp(x_lo, x_hi, j);
            let preference = match cmp_eps(x, v, tie_eps) {
                Greater => Preference::PrefersL,
                Less => Preference::PrefersR,
                Equal => Preference::Indifferent,
            };
            cells.push(RegionCell { v, x, preference });
        }
    }
    cells
}

/// Interval of `k_o` values (inclusive bounds) within which perturbations
/// leave the realized case and its formula branches unchanged, or `None`
/// when `k_o` enters the realized formulas (case 5 with `k_o < V_o`).
///
/// Used to test that classifications are invariant to the outsider's
/// ideology wherever it does not enter the realized equilibrium.
pub fn k_o_validity_interval(
    params: &ModelParams,
    tie_eps: f64,
) -> Result<Option<(f64, f64)>, ModelError> {
    let case = classify_outsider(params, tie_eps)?;
    let v_r = params.v_r();
    let v_o = params.v_o();
    let big = 1e6;
    let margin = 1e-6;
    Ok(match case.index {
        5 => {
            if params.k_o < v_o {
                None
            } else {
                Some((v_o.max(0.0), big))
            }
        }
        6 => {
            let floor = 2.0 * params.b_r - params.k_l.max(v_r);
            Some((floor.max(0.0) + margin, big))
        }
        _ => Some((0.0, big)),
    })
}
