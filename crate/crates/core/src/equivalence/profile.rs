//! Linear invariants used to gate equivalence searches.

use crate::error::Result;
use crate::planarfn::PlanarFn;
use crate::semifield::Semifield;

use super::orbits::{right_orbits, OrbitMultiset};

/// Orbit computation is skipped from this degree on unless long runs are allowed.
pub const ORBIT_GATE_DEGREE: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProfileOptions {
    pub orbits: bool,
    pub allow_long_running: bool,
}

impl ProfileOptions {
    pub fn with_orbits() -> Self {
        ProfileOptions {
            orbits: true,
            allow_long_running: false,
        }
    }

    pub fn orbits_enabled(&self, n: usize) -> bool {
        self.orbits && (n < ORBIT_GATE_DEGREE || self.allow_long_running)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantProfile {
    pub do_flag: bool,
    pub degree: u32,
    /// `(|N|, |N_m|)`; `None` for non-DO functions.
    pub nuclei: Option<(u64, u64)>,
    pub orbits: Option<OrbitMultiset>,
    /// Least discrete log in each right orbit.
    pub orbit_reps: Option<Vec<u32>>,
}

impl InvariantProfile {
    /// Compares the invariants both sides have; missing values do not separate.
    pub fn compatible(&self, other: &InvariantProfile) -> bool {
        self.do_flag == other.do_flag
            && self.degree == other.degree
            && opt_eq(&self.nuclei, &other.nuclei)
            && opt_eq(&self.orbits, &other.orbits)
    }
}

fn opt_eq<T: PartialEq>(a: &Option<T>, b: &Option<T>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

pub fn invariant_profile(f: &PlanarFn, opts: ProfileOptions) -> Result<InvariantProfile> {
    let degree = f.algebraic_degree()?;
    let do_flag = f.is_do();
    let mut profile = InvariantProfile {
        do_flag,
        degree,
        nuclei: None,
        orbits: None,
        orbit_reps: None,
    };
    if do_flag {
        let nu = Semifield::from_planar(f)?.nuclei();
        profile.nuclei = Some((nu.nucleus_order(), nu.middle_order()));
        if opts.orbits_enabled(f.n()) {
            let ro = right_orbits(f)?;
            profile.orbit_reps = Some(ro.representative_logs(f.ctx()));
            profile.orbits = Some(ro.multiset);
        }
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn non_do_profile() {
        let f = PlanarFn::parse(make_field(6).unwrap(), "x^14").unwrap();
        let p = invariant_profile(&f, ProfileOptions::with_orbits()).unwrap();
        assert_eq!((p.do_flag, p.degree, p.nuclei, p.orbits), (false, 4, None, None));
    }

    #[test]
    fn gate() {
        let f = PlanarFn::parse(make_field(8).unwrap(), "x^244 + 2*x^84 + 2*x^82").unwrap();
        let p = invariant_profile(&f, ProfileOptions::with_orbits()).unwrap();
        assert_eq!(p.nuclei, Some((3, 9)));
        assert!(p.orbits.is_none());
    }
}
