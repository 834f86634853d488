//! JSON schemas for instances, divisions, fairness reports and sweeps.
//! Every rational travels as an exact decimal-free `"p/q"` string so files
//! stay exact and diffable.

use serde::{Deserialize, Serialize};

use crate::cake::{Interval, Subcake};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::protocols::Division;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::valuation::Valuation;
use crate::verify::{FairnessReport, SymmetryCheck};

#[derive(Serialize, Deserialize)]
struct SegmentDto {
    from: String,
    to: String,
    weight: String,
}

#[derive(Serialize, Deserialize)]
struct PlayerDto {
    name: String,
    density: Vec<SegmentDto>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDto {
    players: Vec<PlayerDto>,
}

pub fn instance_to_json(instance: &Instance) -> String {
    let dto = InstanceDto {
        players: instance
            .names()
            .iter()
            .zip(instance.valuations())
            .map(|(name, v)| PlayerDto {
                name: name.clone(),
                density: v
                    .segments()
                    .iter()
                    .map(|(iv, d)| SegmentDto {
                        from: format_rational(iv.lo()),
                        to: format_rational(iv.hi()),
                        weight: format_rational(d),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("instance serialization cannot fail")
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let dto: InstanceDto =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("bad instance file: {e}")))?;
    let mut players = Vec::with_capacity(dto.players.len());
    for p in dto.players {
        let mut segments = Vec::with_capacity(p.density.len());
        for s in &p.density {
            let lo = parse_rational(&s.from)?;
            let hi = parse_rational(&s.to)?;
            let weight = parse_rational(&s.weight)?;
            segments.push((Interval::new(lo, hi).map_err(schema)?, weight));
        }
        players.push((p.name, Valuation::new(segments)?));
    }
    Instance::new(players)
}

fn schema(e: Error) -> Error {
    Error::Schema(e.to_string())
}

#[derive(Serialize, Deserialize)]
struct LedgerDto {
    eval: usize,
    cut: usize,
}

#[derive(Serialize, Deserialize)]
struct PieceDto {
    player: String,
    intervals: Vec<[String; 2]>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct DivisionDto {
    algorithm: String,
    order: Vec<String>,
    pieces: Vec<PieceDto>,
    ledger: LedgerDto,
}

pub fn division_to_json(division: &Division, names: &[String]) -> String {
    let dto = DivisionDto {
        algorithm: division.algorithm.clone(),
        order: names.to_vec(),
        pieces: names
            .iter()
            .zip(&division.pieces)
            .zip(&division.values)
            .map(|((name, piece), value)| PieceDto {
                player: name.clone(),
                intervals: piece
                    .intervals()
                    .iter()
                    .map(|iv| [format_rational(iv.lo()), format_rational(iv.hi())])
                    .collect(),
                value: format_rational(value),
            })
            .collect(),
        ledger: LedgerDto {
            eval: division.ledger.eval_count(),
            cut: division.ledger.cut_count(),
        },
    };
    serde_json::to_string_pretty(&dto).expect("division serialization cannot fail")
}

/// A division file read back: pieces in the stored player order.
#[derive(Debug, Clone)]
pub struct LoadedDivision {
    pub algorithm: String,
    pub order: Vec<String>,
    pub pieces: Vec<Subcake>,
    pub values: Vec<Rational>,
    pub eval_count: usize,
    pub cut_count: usize,
}

pub fn division_from_json(text: &str) -> Result<LoadedDivision> {
    let dto: DivisionDto =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("bad division file: {e}")))?;
    if dto.order.len() != dto.pieces.len() {
        return Err(Error::Schema(
            "division order and pieces disagree on player count".into(),
        ));
    }
    let mut pieces = Vec::with_capacity(dto.pieces.len());
    let mut values = Vec::with_capacity(dto.pieces.len());
    for (name, p) in dto.order.iter().zip(&dto.pieces) {
        if name != &p.player {
            return Err(Error::Schema(format!(
                "piece list out of order: expected {name:?}, found {:?}",
                p.player
            )));
        }
        let mut intervals = Vec::with_capacity(p.intervals.len());
        for [lo, hi] in &p.intervals {
            intervals
                .push(Interval::new(parse_rational(lo)?, parse_rational(hi)?).map_err(schema)?);
        }
        pieces.push(Subcake::from_intervals(intervals).map_err(schema)?);
        values.push(parse_rational(&p.value)?);
    }
    Ok(LoadedDivision {
        algorithm: dto.algorithm,
        order: dto.order,
        pieces,
        values,
        eval_count: dto.ledger.eval,
        cut_count: dto.ledger.cut,
    })
}

#[derive(Serialize)]
struct ValueDto {
    player: String,
    value: String,
}

#[derive(Serialize)]
struct WitnessDto {
    player_a: String,
    player_b: String,
    value_a: String,
    value_b: String,
}

#[derive(Serialize)]
struct CheckDto {
    property: String,
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct ReportDto {
    values: Vec<ValueDto>,
    properties: Vec<CheckDto>,
    ledger: LedgerDto,
}

pub fn report_to_json(report: &FairnessReport, names: &[String]) -> String {
    let dto = ReportDto {
        values: names
            .iter()
            .zip(&report.values)
            .map(|(name, v)| ValueDto {
                player: name.clone(),
                value: format_rational(v),
            })
            .collect(),
        properties: report
            .checks
            .iter()
            .map(|c| CheckDto {
                property: c.property.name().to_string(),
                verdict: if c.pass { "pass" } else { "fail" }.to_string(),
                witness: c.witness.as_ref().map(|w| WitnessDto {
                    player_a: names[w.player_a].clone(),
                    player_b: names[w.player_b].clone(),
                    value_a: format_rational(&w.value_a),
                    value_b: format_rational(&w.value_b),
                }),
                detail: c.detail.clone(),
            })
            .collect(),
        ledger: LedgerDto {
            eval: report.eval_count,
            cut: report.cut_count,
        },
    };
    serde_json::to_string_pretty(&dto).expect("report serialization cannot fail")
}

#[derive(Serialize)]
struct SweepRowDto {
    order: Vec<String>,
    values: Vec<ValueDto>,
}

#[derive(Serialize)]
struct SweepDto {
    symmetric: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessDto>,
    orders: Vec<SweepRowDto>,
}

pub fn sweep_to_json(check: &SymmetryCheck, names: &[String]) -> String {
    let dto = SweepDto {
        symmetric: check.pass,
        witness: check.witness.as_ref().map(|w| WitnessDto {
            player_a: names[w.player].clone(),
            player_b: format!(
                "order {}",
                w.permutation
                    .iter()
                    .map(|&p| names[p].clone())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            value_a: format_rational(&w.baseline),
            value_b: format_rational(&w.observed),
        }),
        orders: check
            .orders
            .iter()
            .map(|(perm, values)| SweepRowDto {
                order: perm.iter().map(|&p| names[p].clone()).collect(),
                values: names
                    .iter()
                    .zip(values)
                    .map(|(name, v)| ValueDto {
                        player: name.clone(),
                        value: format_rational(v),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("sweep serialization cannot fail")
}
