use std::collections::BTreeSet;

use serde::Serialize;

use crate::definability::DefinableEnumeration;
use crate::error::{Error, Result};
use crate::formula::Sign;
use crate::structure::Structure;
use crate::tuples::Elem;

use super::{Sequence, SequenceMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub index: usize,
    /// Number of enumeration items in force at this index.
    pub level: usize,
    /// `σ_i = P_i(f(k), a(k))` for the items in force.
    pub signs: Vec<Sign>,
    /// `m_k`: longest prefix of `signs` realized over the images.
    pub realized: usize,
    pub value: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionTrace {
    pub steps: Vec<TraceStep>,
    /// Largest index at which some pattern `(∃y) ⋀_{i≤j} P_i^{σ_i}` fails to
    /// transfer from the domain side to the image side; 0 if none does.
    pub n0: usize,
    pub transfer_failures: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub image: Sequence,
    /// `a` was already in the domain and its stored image is returned.
    pub existing: bool,
    pub trace: Option<ExtensionTrace>,
}

/// Chooses an image `b` for a new point `a` index by index, matching the
/// longest possible prefix of `a`'s sign pattern against the current images.
/// Ties go to the least universe element.
pub fn extend_map(
    s: &Structure,
    map: &SequenceMap,
    a: &Sequence,
    e: &DefinableEnumeration,
) -> Result<Extension> {
    if let Some(image) = map.image(a) {
        return Ok(Extension {
            image: image.clone(),
            existing: true,
            trace: None,
        });
    }
    let n = s.size();
    let d = map.len();
    if e.arity != d + 1 {
        return Err(Error::ArityMismatch {
            name: format!("{} enumeration", e.mode),
            expected: d + 1,
            found: e.arity,
        });
    }
    let k_len = if map.is_empty() {
        a.len()
    } else {
        map.length()
    };
    if k_len == 0 {
        return Err(Error::Invalid("sequence length must be positive".into()));
    }
    a.check_len(k_len)?;
    a.check_universe(n)?;
    map.check_universe(n)?;

    let m = e.len();
    let mut steps = Vec::with_capacity(k_len);
    let mut transfer_failures = Vec::new();
    let mut tuple = vec![0; d + 1];
    for k in 0..k_len {
        let signs_at = |point: &[Elem], y: Elem, tuple: &mut Vec<Elem>, upto: usize| -> Vec<Sign> {
            tuple[..d].copy_from_slice(point);
            tuple[d] = y;
            e.pattern(tuple, upto)
        };
        let fk: Vec<Elem> = map.entries().iter().map(|(f, _)| f.at(k)).collect();
        let gk: Vec<Elem> = map.entries().iter().map(|(_, g)| g.at(k)).collect();

        let domain_side: BTreeSet<Vec<Sign>> =
            (0..n).map(|y| signs_at(&fk, y, &mut tuple, m)).collect();
        let image_side: BTreeSet<Vec<Sign>> =
            (0..n).map(|y| signs_at(&gk, y, &mut tuple, m)).collect();
        if domain_side != image_side {
            transfer_failures.push(k);
        }

        let level = e.level_at(k);
        let signs = signs_at(&fk, a.at(k), &mut tuple, level);
        let mut realized = 0;
        let mut value = 0;
        for y in 0..n {
            let candidate = signs_at(&gk, y, &mut tuple, level);
            let agree = candidate
                .iter()
                .zip(&signs)
                .take_while(|(x, y)| x == y)
                .count();
            if agree > realized {
                realized = agree;
                value = y;
            }
        }
        steps.push(TraceStep {
            index: k,
            level,
            signs,
            realized,
            value,
        });
    }
    let image = Sequence::new(steps.iter().map(|st| st.value).collect());
    Ok(Extension {
        image,
        existing: false,
        trace: Some(ExtensionTrace {
            steps,
            n0: transfer_failures.last().copied().unwrap_or(0),
            transfer_failures,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::definability::enumerate_definables;
    use crate::structure::parse_structure;

    fn two_k2() -> Structure {
        parse_structure(
            "universe 4\nrel E arity 2\n0 1\n1 0\n2 3\n3 2\nend\ntarget R arity 1\n0\n1\nend",
        )
        .unwrap()
    }

    #[test]
    fn two_k2_example() {
        let s = two_k2();
        let mut map = SequenceMap::new(5);
        map.insert(Sequence::constant(5, 0), Sequence::constant(5, 2))
            .unwrap();
        let e = enumerate_definables(&s, 2, "orbit-atoms").unwrap();
        let ext = extend_map(&s, &map, &Sequence::constant(5, 1), &e).unwrap();
        assert_eq!(ext.image, Sequence::constant(5, 3));
        let trace = ext.trace.unwrap();
        assert_eq!(trace.n0, 0);
        assert!(trace.transfer_failures.is_empty());
        assert!(trace.steps.iter().all(|st| st.realized == e.len()));
    }

    #[test]
    fn existing_point_is_flagged() {
        let s = two_k2();
        let mut map = SequenceMap::new(2);
        map.insert(Sequence::constant(2, 0), Sequence::constant(2, 2))
            .unwrap();
        let e = enumerate_definables(&s, 1, "orbit-atoms").unwrap();
        let ext = extend_map(&s, &map, &Sequence::constant(2, 0), &e).unwrap();
        assert!(ext.existing);
        assert_eq!(ext.image, Sequence::constant(2, 2));
        assert!(matches!(
            extend_map(&s, &map, &Sequence::constant(2, 1), &e),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn empty_domain_transitive_group() {
        let s = two_k2();
        let e = enumerate_definables(&s, 1, "orbit-atoms").unwrap();
        let a: Sequence = "3,1,2,0".parse().unwrap();
        let ext = extend_map(&s, &SequenceMap::new(0), &a, &e).unwrap();
        assert_eq!(ext.image, Sequence::constant(4, 0));
    }

    #[test]
    fn untransferable_patterns_are_reported() {
        let s = two_k2();
        let mut map = SequenceMap::new(3);
        map.insert("0,0,0".parse().unwrap(), "0,1,0".parse().unwrap())
            .unwrap();
        map.insert("1,2,1".parse().unwrap(), "1,0,2".parse().unwrap())
            .unwrap();
        let e = enumerate_definables(&s, 3, "orbit-atoms").unwrap();
        let ext = extend_map(&s, &map, &"3,3,3".parse().unwrap(), &e).unwrap();
        let trace = ext.trace.unwrap();
        assert_eq!(trace.transfer_failures, vec![1, 2]);
        assert_eq!(trace.n0, 2);
        assert_eq!(trace.steps[0].value, 2);
    }
}
