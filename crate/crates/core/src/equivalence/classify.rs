//! Invariant-gated classification of planar functions into a catalog.

use log::{debug, warn};

use crate::error::{Error, Result};
use crate::planarfn::{cyclotomic_equivalent, PlanarFn};

use super::catalog::{Catalog, ClassRecord};
use super::linear_equivalent;
use super::profile::{invariant_profile, InvariantProfile, ProfileOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchKind {
    Cyclotomic,
    Witness,
    New,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchEvent {
    pub candidate: usize,
    pub class_id: String,
    pub kind: MatchKind,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub catalog: Catalog,
    pub events: Vec<MatchEvent>,
    pub profiles: Vec<InvariantProfile>,
}

pub struct Candidate {
    pub function: PlanarFn,
    pub families: Vec<String>,
}

impl Candidate {
    pub fn new(function: PlanarFn, families: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Candidate {
            function,
            families: families.into_iter().map(Into::into).collect(),
        }
    }
}

/// Outcome of comparing two canonical planar functions.
pub fn same_class(
    a: &PlanarFn,
    pa: &InvariantProfile,
    b: &PlanarFn,
    pb: &InvariantProfile,
) -> Result<Option<MatchKind>> {
    if let (Some(d), Some(e)) = (a.single_exponent(), b.single_exponent()) {
        // c x^d is x^d up to an output scaling
        return Ok(cyclotomic_equivalent(d, e, a.n()).then_some(MatchKind::Cyclotomic));
    }
    if !pa.compatible(pb) {
        return Ok(None);
    }
    if pa.do_flag && pb.do_flag {
        return Ok(linear_equivalent(a, b)?.map(|_| MatchKind::Witness));
    }
    warn!("no equivalence test for non-DO pair {a} / {b}; treating as distinct");
    Ok(None)
}

/// Assigns every candidate to a class of `seed`, appending new classes with
/// ids `n.k`. Deterministic in the input order.
pub fn classify(candidates: &[Candidate], seed: Catalog, opts: ProfileOptions) -> Result<Classification> {
    let mut catalog = seed;
    let mut profiles = Vec::with_capacity(catalog.len());
    let mut reps = Vec::with_capacity(catalog.len());
    for r in &catalog.records {
        let rep = r.representative.ea_normal();
        profiles.push(invariant_profile(&rep, opts)?);
        reps.push(rep);
    }
    let n = candidates.first().map(|c| c.function.n());
    let mut events = Vec::new();
    for (idx, cand) in candidates.iter().enumerate() {
        if Some(cand.function.n()) != n {
            return Err(Error::ContextMismatch(n.unwrap_or(0), cand.function.n()));
        }
        if !cand.function.is_planar()? {
            return Err(Error::NotPlanar);
        }
        let f = cand.function.ea_normal();
        let pf = invariant_profile(&f, opts)?;
        let mut matched = None;
        for (k, (rep, pr)) in reps.iter().zip(&profiles).enumerate() {
            if rep.n() != f.n() {
                continue;
            }
            if let Some(kind) = same_class(rep, pr, &f, &pf)? {
                matched = Some((k, kind));
                break;
            }
        }
        let (k, kind) = match matched {
            Some(m) => m,
            None => {
                let id = format!("{}.{}", f.n(), reps.iter().filter(|r| r.n() == f.n()).count() + 1);
                let mut rec = ClassRecord::new(id, cand.function.clone(), Vec::new());
                rec.nuclei = pf.nuclei;
                rec.orbits = pf.orbits.clone();
                catalog.records.push(rec);
                reps.push(f);
                profiles.push(pf);
                (catalog.len() - 1, MatchKind::New)
            }
        };
        let rec = &mut catalog.records[k];
        for fam in &cand.families {
            if !rec.families.contains(fam) {
                rec.families.push(fam.clone());
            }
        }
        debug!("candidate {idx} ({}) -> {} ({kind:?})", cand.function, rec.id);
        events.push(MatchEvent {
            candidate: idx,
            class_id: rec.id.clone(),
            kind,
        });
    }
    Ok(Classification {
        catalog,
        events,
        profiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn merges_equivalent_candidates() {
        let ctx = make_field(5).unwrap();
        let c = |s: &str, fam: &str| Candidate::new(PlanarFn::parse(ctx.clone(), s).unwrap(), [fam]);
        let cands = [
            c("x^2", "FF"),
            c("x^6", "A"),
            c("x^4", "A"),
            c("x^90 + x^2", "ACW"),
            c("g^2*x^2", "FF"),
        ];
        let out = classify(&cands, Catalog::new(), ProfileOptions::default()).unwrap();
        let ids: Vec<&str> = out.events.iter().map(|e| e.class_id.as_str()).collect();
        assert_eq!(ids, ["5.1", "5.1", "5.2", "5.3", "5.1"]);
        assert_eq!(out.catalog.len(), 3);
        assert_eq!(out.catalog.records[0].families, ["FF", "A"]);
    }
}
