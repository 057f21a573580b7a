use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::coeff::{Coefficient, GaussRat, Rational};
use super::diffpoly::{DiffPoly, Monomial};
use super::jet::{Field, JetVar};
use super::RingError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub sqrtkappa_pow: i32,
    pub re: [i128; 2],
    pub im: [i128; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetJson {
    pub field: String,
    pub dx: u32,
    pub dt: Vec<[u32; 2]>,
}

/// One wire term: a single `sqrt(kappa)` power times a product of jets.
/// Powers are written by repeating the jet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub jets: Vec<JetJson>,
}

fn pair(q: &Rational) -> [i128; 2] {
    [*q.numer(), *q.denom()]
}

fn unpair(p: [i128; 2]) -> Result<Rational, RingError> {
    if p[1] == 0 {
        return Err(RingError::Json("zero denominator".into()));
    }
    Ok(Rational::new(p[0], p[1]))
}

impl DiffPoly {
    pub fn to_wire(&self) -> Vec<TermJson> {
        let mut out = Vec::new();
        for (m, c) in self.terms() {
            let mut jets = Vec::new();
            for (v, e) in m.factors() {
                for _ in 0..*e {
                    jets.push(JetJson {
                        field: v.field.name(),
                        dx: v.x_order,
                        dt: v.t_orders().iter().map(|&(n, k)| [n, k]).collect(),
                    });
                }
            }
            for (p, g) in c.terms() {
                out.push(TermJson {
                    coeff: CoeffJson { sqrtkappa_pow: p, re: pair(&g.re), im: pair(&g.im) },
                    jets: jets.clone(),
                });
            }
        }
        out
    }

    pub fn from_wire(terms: &[TermJson]) -> Result<DiffPoly, RingError> {
        let mut out = DiffPoly::zero();
        for t in terms {
            let g = GaussRat::new(unpair(t.coeff.re)?, unpair(t.coeff.im)?);
            let mut m = Monomial::one();
            for j in &t.jets {
                let field = Field::parse(&j.field).ok_or_else(|| RingError::Json(format!("unknown field {}", j.field)))?;
                let dt: Vec<(u32, u32)> = j.dt.iter().map(|p| (p[0], p[1])).collect();
                m = m.mul(&Monomial::var(JetVar::new(field, j.dx, &dt)));
            }
            out.add_term(m, &Coefficient::term(t.coeff.sqrtkappa_pow, g));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_wire()).expect("wire terms serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<DiffPoly, RingError> {
        let terms: Vec<TermJson> = serde_json::from_value(v.clone()).map_err(|e| RingError::Json(e.to_string()))?;
        Self::from_wire(&terms)
    }
}

impl Serialize for DiffPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        DiffPoly::from_wire(&terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringcore::Direction;

    #[test]
    fn wire_format_shape() {
        let p = DiffPoly::var(JetVar::new(Field::PsiBar, 1, &[(2, 1)])).scale(&Coefficient::frac(-1, 2));
        let v = p.to_json();
        assert_eq!(
            v,
            serde_json::json!([{"coeff":{"sqrtkappa_pow":0,"re":[-1,2],"im":[0,1]},
                                "jets":[{"field":"psibar","dx":1,"dt":[[2,1]]}]}])
        );
    }

    #[test]
    fn mixed_kappa_powers_split_into_terms() {
        let c = &Coefficient::one() + &Coefficient::kappa();
        let p = (&DiffPoly::psi().pow(2) * &DiffPoly::psi_x(1).d_x().d_pow(Direction::X, 0)).scale(&c);
        let w = p.to_wire();
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].jets.len(), 3);
        assert_eq!(DiffPoly::from_wire(&w).unwrap(), p);
    }
}
