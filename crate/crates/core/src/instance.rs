//! Auction instances, validation and the JSON instance format.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::items::{ItemSet, MAX_ITEMS};
use crate::price::{PriceGrid, PriceVector};
use crate::valuation::{Valuation, ValuationKind};

pub const MAX_BIDDERS: usize = 16;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub items: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidders: Option<Vec<String>>,
}

/// `m` items and `n` bidder valuations over them. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    m: usize,
    bidders: Vec<Valuation>,
    labels: Option<Labels>,
}

impl Instance {
    pub fn new(m: usize, bidders: Vec<Valuation>) -> Result<Self> {
        check_cap("m", m, MAX_ITEMS)?;
        check_cap("n", bidders.len(), MAX_BIDDERS)?;
        for v in &bidders {
            if v.m() != m {
                return Err(Error::Malformed(format!(
                    "valuation over {} items in an instance with m = {m}",
                    v.m()
                )));
            }
        }
        Ok(Instance {
            m,
            bidders,
            labels: None,
        })
    }

    #[must_use]
    pub fn with_labels(mut self, labels: Labels) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.bidders.len()
    }

    pub fn bidders(&self) -> &[Valuation] {
        &self.bidders
    }

    pub fn bidder(&self, i: usize) -> Result<&Valuation> {
        self.bidders.get(i).ok_or(Error::BidderOutOfRange {
            bidder: i,
            n: self.n(),
        })
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn full_set(&self) -> ItemSet {
        ItemSet::full(self.m)
    }

    /// `max_i v_i(Ω)`.
    pub fn vmax(&self) -> u64 {
        self.bidders.iter().map(Valuation::grand_value).max().unwrap_or(0)
    }

    /// Grid bound `B = Vmax + 1`. Every Walrasian vector lies in `[0, B]^m`.
    pub fn grid_bound(&self) -> u64 {
        self.vmax() + 1
    }

    pub fn grid(&self) -> PriceGrid {
        PriceGrid::new(self.m, self.grid_bound())
    }

    pub fn check_price(&self, p: &PriceVector) -> Result<()> {
        if p.len() != self.m {
            return Err(Error::PriceArity {
                expected: self.m,
                actual: p.len(),
            });
        }
        Ok(())
    }

    pub fn check_set(&self, s: ItemSet) -> Result<()> {
        if !s.fits(self.m) {
            return Err(Error::SetOutOfRange(s));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceDoc::from(self)).expect("instance serializes")
    }

    /// Parses the JSON instance format. Normalization and monotonicity
    /// violations are accepted here and surfaced by [`validate`].
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)?;
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::Malformed("top level must be an object".into()))?;
        let m = natural(obj.get("m").ok_or_else(|| Error::Malformed("missing \"m\"".into()))?, "m")?;
        let m = usize::try_from(m).unwrap_or(usize::MAX);
        check_cap("m", m, MAX_ITEMS)?;
        let bidders = obj
            .get("bidders")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("\"bidders\" must be an array".into()))?;
        check_cap("n", bidders.len(), MAX_BIDDERS)?;

        let mut valuations = Vec::with_capacity(bidders.len());
        for (i, b) in bidders.iter().enumerate() {
            let kind = b.get("kind").and_then(Value::as_str).ok_or_else(|| {
                Error::Malformed(format!("bidder {i}: missing string \"kind\""))
            })?;
            let raw = b.get("values").and_then(Value::as_array).ok_or_else(|| {
                Error::Malformed(format!("bidder {i}: \"values\" must be an array"))
            })?;
            let values = raw
                .iter()
                .map(|x| natural(x, "value"))
                .collect::<Result<Vec<_>>>()?;
            let expect = |len: usize| {
                if values.len() == len {
                    Ok(())
                } else {
                    Err(Error::Malformed(format!(
                        "bidder {i}: kind {kind} needs {len} values, got {}",
                        values.len()
                    )))
                }
            };
            let v = match kind {
                "additive" => {
                    expect(m)?;
                    Valuation::additive(&values)?
                }
                "unit_demand" => {
                    expect(m)?;
                    Valuation::unit_demand(&values)?
                }
                "table" => {
                    expect(1 << m)?;
                    Valuation::table_unchecked(values)?
                }
                other => {
                    return Err(Error::Malformed(format!("bidder {i}: unknown kind {other:?}")))
                }
            };
            valuations.push(v);
        }

        let labels = match obj.get("labels") {
            None | Some(Value::Null) => None,
            Some(l) => Some(serde_json::from_value::<Labels>(l.clone())?),
        };
        let mut inst = Instance::new(m, valuations)?;
        inst.labels = labels;
        Ok(inst)
    }
}

fn check_cap(what: &'static str, value: usize, max: usize) -> Result<()> {
    if value == 0 || value > max {
        return Err(Error::Cap { what, value, max });
    }
    Ok(())
}

fn natural(x: &Value, what: &str) -> Result<u64> {
    if let Some(v) = x.as_u64() {
        return Ok(v);
    }
    match x.as_i64() {
        Some(neg) => Err(Error::Domain(format!("{what} {neg} is negative"))),
        None => Err(Error::Domain(format!("{what} {x} is not a natural number"))),
    }
}

#[derive(Serialize)]
struct InstanceDoc {
    m: usize,
    bidders: Vec<BidderDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Labels>,
}

#[derive(Serialize)]
struct BidderDoc {
    kind: ValuationKind,
    values: Vec<u64>,
}

impl From<&Instance> for InstanceDoc {
    fn from(inst: &Instance) -> Self {
        let bidders = inst
            .bidders
            .iter()
            .map(|v| BidderDoc {
                kind: v.kind(),
                values: match v.kind() {
                    ValuationKind::Table => v.values().to_vec(),
                    _ => v.item_values(),
                },
            })
            .collect();
        InstanceDoc {
            m: inst.m,
            bidders,
            labels: inst.labels.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    NotNormalized {
        bidder: usize,
        value: u64,
    },
    NotMonotone {
        bidder: usize,
        subset: ItemSet,
        superset: ItemSet,
        subset_value: u64,
        superset_value: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub well_formed: bool,
    pub violations: Vec<Violation>,
    pub vmax: u64,
    pub grid_bound: u64,
}

/// Checks every bidder for normalization and monotonicity.
pub fn validate(inst: &Instance) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, v) in inst.bidders().iter().enumerate() {
        match v.first_violation() {
            Some(Error::NotNormalized(value)) => {
                violations.push(Violation::NotNormalized { bidder: i, value })
            }
            Some(Error::NotMonotone {
                subset,
                superset,
                low_value,
                high_value,
            }) => violations.push(Violation::NotMonotone {
                bidder: i,
                subset,
                superset,
                subset_value: low_value,
                superset_value: high_value,
            }),
            _ => {}
        }
    }
    ValidationReport {
        well_formed: violations.is_empty(),
        violations,
        vmax: inst.vmax(),
        grid_bound: inst.grid_bound(),
    }
}

/// Named example instances shipped with the crate.
pub mod fixtures {
    use super::*;

    /// Three identical additive bidders valuing each of two items at 1.
    pub fn e1() -> Instance {
        let v = Valuation::additive(&[1, 1]).unwrap();
        Instance::new(2, vec![v.clone(), v.clone(), v]).unwrap()
    }

    /// Two identical unit-demand bidders with item values (2, 1).
    pub fn u1() -> Instance {
        let v = Valuation::unit_demand(&[2, 1]).unwrap();
        Instance::new(2, vec![v.clone(), v]).unwrap()
    }

    /// A single bidder with table (0, 1, 1, 3): monotone, not gross substitute.
    pub fn x1() -> Instance {
        Instance::new(2, vec![Valuation::table(vec![0, 1, 1, 3]).unwrap()]).unwrap()
    }

    /// A single all-zero bidder on two items.
    pub fn z0() -> Instance {
        Instance::new(2, vec![Valuation::table(vec![0; 4]).unwrap()]).unwrap()
    }

    /// The all-zero bidder declared as unit demand.
    pub fn z0_unit_demand() -> Instance {
        Instance::new(2, vec![Valuation::unit_demand(&[0, 0]).unwrap()]).unwrap()
    }

    /// Pure complements: (0, 0, 0, 2).
    pub fn c2() -> Instance {
        Instance::new(2, vec![Valuation::table(vec![0, 0, 0, 2]).unwrap()]).unwrap()
    }

    pub fn by_name(name: &str) -> Option<Instance> {
        match name.to_ascii_lowercase().as_str() {
            "e1" => Some(e1()),
            "u1" => Some(u1()),
            "x1" => Some(x1()),
            "z0" => Some(z0()),
            "c2" => Some(c2()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn validate_fixtures() {
        let r = validate(&e1());
        assert!(r.well_formed);
        assert_eq!((r.vmax, r.grid_bound), (2, 3));
        let r = validate(&u1());
        assert!(r.well_formed);
        assert_eq!((r.vmax, r.grid_bound), (2, 3));
    }

    #[test]
    fn validate_reports_monotonicity_witness() {
        let inst = Instance::from_json(r#"{"m":2,"bidders":[{"kind":"table","values":[0,2,1,1]}]}"#)
            .unwrap();
        let r = validate(&inst);
        assert!(!r.well_formed);
        assert_eq!(
            r.violations,
            vec![Violation::NotMonotone {
                bidder: 0,
                subset: ItemSet::from_items([0]),
                superset: ItemSet::from_items([0, 1]),
                subset_value: 2,
                superset_value: 1,
            }]
        );
    }

    #[test]
    fn json_round_trip_fixtures() {
        for inst in [e1(), u1(), x1(), z0()] {
            assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
        }
        let labelled = e1().with_labels(Labels {
            items: Some(vec!["north".into(), "south".into()]),
            bidders: None,
        });
        assert_eq!(Instance::from_json(&labelled.to_json()).unwrap(), labelled);
    }

    #[test]
    fn json_errors() {
        let too_many = format!(
            r#"{{"m":17,"bidders":[{{"kind":"additive","values":{:?}}}]}}"#,
            vec![1; 17]
        );
        assert!(matches!(Instance::from_json(&too_many), Err(Error::Cap { what: "m", .. })));
        let negative = r#"{"m":2,"bidders":[{"kind":"additive","values":[1,-1]}]}"#;
        assert!(matches!(Instance::from_json(negative), Err(Error::Domain(_))));
        let fractional = r#"{"m":2,"bidders":[{"kind":"additive","values":[1,0.5]}]}"#;
        assert!(matches!(Instance::from_json(fractional), Err(Error::Domain(_))));
        let no_bidders = r#"{"m":2,"bidders":[]}"#;
        assert!(matches!(Instance::from_json(no_bidders), Err(Error::Cap { what: "n", .. })));
        let short_table = r#"{"m":2,"bidders":[{"kind":"table","values":[0,1,1]}]}"#;
        assert!(matches!(Instance::from_json(short_table), Err(Error::Malformed(_))));
        assert!(Instance::from_json("[1,2]").is_err());
        assert!(Instance::from_json("{").is_err());
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(e1().digest(), e1().digest());
        assert_ne!(e1().digest(), u1().digest());
    }
}
