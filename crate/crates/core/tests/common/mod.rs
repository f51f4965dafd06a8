#![allow(dead_code)]

use std::sync::Arc;

use qcluster::cluster::{CompatiblePair, IceQuiver};
use qcluster::exact::LaurentV;
use qcluster::rep::Quiver;
use qcluster::torus::{SkewForm, TorusElement};

/// Arrows 1->2, 2->3, 3->1, 4->2 with 3 and 4 frozen (0-based below).
pub fn framed_a2() -> IceQuiver {
    IceQuiver::new(4, 2, vec![(0, 1), (1, 2), (2, 0), (3, 1)]).unwrap()
}

/// Three arms 1->2->3, 1->4->5, 1->6->7 and frames i+7 -> i.
pub fn framed_e6() -> IceQuiver {
    let q = Quiver::new(7, vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
    IceQuiver::principal_framing(&q)
}

pub fn pair(q: &IceQuiver) -> CompatiblePair {
    CompatiblePair::from_quiver(q).unwrap()
}

/// Parses `X(a,b,...)+X(...)` with unit coefficients.
pub fn unit_sum(form: &Arc<SkewForm>, text: &str) -> TorusElement {
    let mut out = TorusElement::zero(form);
    for part in text.split('+') {
        let inner = part.trim().trim_start_matches("X(").trim_end_matches(')');
        let g: Vec<i64> = inner.split(',').map(|x| x.trim().parse().unwrap()).collect();
        out.add_term(g, &LaurentV::one());
    }
    out
}
