#![allow(dead_code)]

use std::path::PathBuf;

use gordian::codec::{ingest_table, IngestOutcome};
use gordian::diagram::{End, PlanarDiagram};
use gordian::LaurentPoly;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

pub fn load_table(name: &str) -> IngestOutcome {
    let f = std::fs::File::open(data_path(name)).unwrap();
    ingest_table(f).unwrap()
}

/// Alexander polynomial of a realized diagram from the Wirtinger presentation (Fox
/// calculus), normalized. Used only to certify fixture rows; independent of Goeritz code.
pub fn alexander_from_diagram(d: &PlanarDiagram) -> LaurentPoly {
    let n = d.crossing_count();
    if n == 0 {
        return LaurentPoly::one();
    }
    let labels = 2 * n;
    // walk the curve: for each label, its crossing, entry slot, and whether it passes under
    let mut passes = Vec::with_capacity(labels);
    let (mut c, mut s) = (0usize, 0usize);
    for _ in 0..labels {
        let x = &d.crossings[c];
        let under = s % 2 != x.over_parity();
        passes.push((c, s, under));
        let out = x.slots[(s + 2) % 4];
        assert_eq!(out.end, End::Tail);
        (c, s) = d.edges[out.edge].head;
    }
    // arc of each edge (edge k leaves label k + 1); arcs break at under-passes
    let first_under = passes.iter().position(|p| p.2).expect("diagram with no under-passes");
    let mut arc_of_edge = vec![0usize; labels];
    let mut arc = 0usize;
    for step in 0..labels {
        let label_idx = (first_under + step) % labels;
        if passes[label_idx].2 && step > 0 {
            arc += 1;
        }
        arc_of_edge[label_idx] = arc;
    }
    let arcs = arc + 1;
    let t = LaurentPoly::monomial(1, 1);
    let one = LaurentPoly::one();
    let mut rows = vec![vec![LaurentPoly::zero(); arcs]; n];
    for (idx, &(c, s_in, under)) in passes.iter().enumerate() {
        if !under {
            continue;
        }
        let incoming = arc_of_edge[(idx + labels - 1) % labels];
        let outgoing = arc_of_edge[idx];
        let over_idx = passes.iter().position(|p| p.0 == c && !p.2).unwrap();
        let over_arc = arc_of_edge[over_idx];
        let over_out = (passes[over_idx].1 + 2) % 4;
        let under_out = (s_in + 2) % 4;
        let positive = under_out == (over_out + 1) % 4;
        let row = &mut rows[c];
        let add = |cell: &mut LaurentPoly, v: &LaurentPoly| *cell = &*cell + v;
        if positive {
            add(&mut row[over_arc], &(&one - &t));
            add(&mut row[incoming], &t);
            add(&mut row[outgoing], &one.scale(-1));
        } else {
            add(&mut row[over_arc], &(&t - &one));
            add(&mut row[incoming], &one);
            add(&mut row[outgoing], &t.scale(-1));
        }
    }
    let minor: Vec<Vec<LaurentPoly>> =
        rows[1..].iter().map(|r| r[1..].to_vec()).collect();
    let det = poly_det(minor);
    det.normalize().expect("Alexander polynomial normalizes")
}

fn poly_det(mut a: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = a.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut sign = 1;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return LaurentPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].scale(sign)
}
