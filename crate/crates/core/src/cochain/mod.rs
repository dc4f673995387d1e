//! Finite windows of the universal cover of the presentation complex, relative
//! cochains on them, and linear-programming certificates for bounded primitives.
//!
//! A window is built from a list of translates. Each translate contributes every
//! cell based at it, and 1-cell endpoints are added so that `∂` of a 1-cell is
//! always available. A 2-cell is interior when its whole boundary lies in the
//! window; only interior cells constrain primitives.

mod chain;
mod lp;
mod nu;
mod window;

pub use chain::{boundary, chain_rel_length, coboundary, evident_bound, pair, Chain, Cochain};
pub use lp::{
    growth_scan, min_linf_primitive, seeded_relative_cochain, CocycleFamily, GrowthRow, GrowthScan, GrowthVerdict,
    LpCertificate, LpStatus, WindowFamily, LP_TOLERANCE,
};
pub use nu::{crucial_echo, nu, path_endpoints, path_rel_length, windowed_max_nu, CrucialEcho, EdgePath};
pub use window::{build_window, build_window_from, relator_boundary, Cell, CellKind, FormalChain, Window, WindowSpec};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Group, ModelImage, OracleSpec};
    use crate::presentation::{Letter, PeripheralModel, RelativePresentation, Word};

    fn z_group() -> Group {
        let p = RelativePresentation::new(
            vec![],
            vec![PeripheralModel::free_abelian(1, 1), PeripheralModel::free_abelian(2, 1)],
            vec![Word::new(vec![Letter::hz(0, 1), Letter::hz(1, 1)])],
        )
        .unwrap();
        let spec = OracleSpec::IntegerQuotient {
            dim: 1,
            x_images: vec![],
            model_images: vec![
                ModelImage { lambda: 1, generators: vec![vec![1]] },
                ModelImage { lambda: 2, generators: vec![vec![-1]] },
            ],
        };
        Group::new(p, spec).unwrap()
    }

    fn z2_group() -> Group {
        let p = RelativePresentation::new(vec!["x".into()], vec![], vec![Word::new(vec![Letter::x(0), Letter::x(0)])])
            .unwrap();
        let spec = OracleSpec::FiniteQuotient {
            table: vec![vec![0, 1], vec![1, 0]],
            identity: 0,
            x_images: vec![1],
            model_images: vec![],
        };
        Group::new(p, spec).unwrap()
    }

    fn strip(g: &Group, n: usize) -> Window {
        build_window(g, &WindowSpec::Strip { step: Word::new(vec![Letter::hz(0, 1)]), n, rho: 1 }).unwrap()
    }

    fn h1_pow(g: &Group, k: i64) -> Word {
        g.normal_form(&Word::new(if k == 0 { vec![] } else { vec![Letter::hz(0, k)] })).unwrap()
    }

    /// `m(h₁^k ẽ¹₁) = −k/2`, `m(h₁^k ẽ¹₂) = k/2`, zero elsewhere.
    fn centered_m(g: &Group, w: &Window, shift: f64) -> Cochain {
        Cochain::from_fn(w, 1, |e| {
            let c = &w.cells[1][e];
            let CellKind::LambdaEdge { model } = c.kind else { return 0.0 };
            let k = (0..=64).find(|&k| h1_pow(g, k) == c.translate).expect("translate on the strip") as f64 - shift;
            if model == 0 {
                -k / 2.0
            } else {
                k / 2.0
            }
        })
    }

    fn indicator(w: &Window) -> Cochain {
        CocycleFamily::RelatorIndicator.on(w).unwrap()
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        for (g, spec) in [
            (z_group(), WindowSpec::Ball { radius: 2, rho: 2 }),
            (z2_group(), WindowSpec::Ball { radius: 2, rho: 1 }),
            (z_group(), WindowSpec::Strip { step: Word::new(vec![Letter::hz(0, 1)]), n: 5, rho: 1 }),
        ] {
            let w = build_window(&g, &spec).unwrap();
            for f in w.interior_cells() {
                let d = boundary(&w, &Chain::from_terms(2, [(f, 1.0)])).unwrap();
                assert!(boundary(&w, &d).unwrap().is_zero(), "{} cell {f}", w.spec_label);
            }
        }
    }

    #[test]
    fn strip_has_one_interior_cell_per_step() {
        let g = z_group();
        let w = strip(&g, 4);
        assert_eq!(w.interior_cells().count(), 4);
        assert!(w.cells[1].iter().any(|c| matches!(c.kind, CellKind::HEdge { .. })));
    }

    #[test]
    fn radius_zero_window_has_no_interior_cells() {
        let g = z_group();
        let w = build_window(&g, &WindowSpec::Ball { radius: 0, rho: 1 }).unwrap();
        assert_eq!(w.interior_cells().count(), 0);
        assert!(w.cells[0].iter().any(|c| c.kind == CellKind::Vertex && c.translate.is_empty()));
        assert!(w.cells[1].iter().any(|c| matches!(c.kind, CellKind::LambdaEdge { .. })));
    }

    #[test]
    fn finite_example_has_two_interior_relator_cells() {
        let g = z2_group();
        let w = build_window(&g, &WindowSpec::Ball { radius: 2, rho: 1 }).unwrap();
        let interior: Vec<_> = w.interior_cells().map(|f| w.cells[2][f].translate.clone()).collect();
        assert_eq!(interior.len(), 2);
        assert!(interior.contains(&Word::empty()));
        assert!(interior.contains(&Word::new(vec![Letter::x(0)])));
    }

    #[test]
    fn centered_cochain_has_unit_coboundary() {
        let g = z_group();
        let w = strip(&g, 6);
        let m = centered_m(&g, &w, 0.0);
        assert!(m.is_relative(&w));
        let dm = coboundary(&w, &m).unwrap();
        for f in w.interior_cells() {
            assert!((dm.values[f] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coboundary_of_coset_constant_cochain_vanishes_on_lbar() {
        let g = z_group();
        let w = strip(&g, 3);
        let d = Cochain::from_fn(&w, 0, |v| w.coset_rep[v] as f64 * 0.5 + 1.0);
        let dd = coboundary(&w, &d).unwrap();
        assert!(dd.is_relative(&w));
        assert_eq!(coboundary(&w, &Cochain::zero(&w, 1)).unwrap().norm_inf(), 0.0);
    }

    #[test]
    fn pairing_indicator_with_four_cells() {
        let g = z_group();
        let w = strip(&g, 4);
        let d = Chain::from_terms(2, w.interior_cells().map(|f| (f, 1.0)));
        assert_eq!(pair(&indicator(&w), &d).unwrap(), 4.0);
        assert_eq!(pair(&Cochain::zero(&w, 2), &d).unwrap(), 0.0);
    }

    #[test]
    fn adjointness_on_seeded_cochains() {
        let g = z_group();
        let w = strip(&g, 5);
        let d = Chain::from_terms(2, w.interior_cells().enumerate().map(|(i, f)| (f, i as f64 - 1.5)));
        for seed in 0..5 {
            let h = seeded_relative_cochain(&w, seed);
            let lhs = pair(&coboundary(&w, &h).unwrap(), &d).unwrap();
            let rhs = pair(&h, &boundary(&w, &d).unwrap()).unwrap();
            assert!((lhs - rhs).abs() < 1e-9);
            let (l, r) = evident_bound(&w, &h, &d).unwrap();
            assert!(l <= r + 1e-9);
        }
    }

    #[test]
    fn strip_lp_norm_is_quarter_length() {
        let g = z_group();
        for n in [4usize, 8] {
            let w = strip(&g, n);
            let cert = min_linf_primitive(&w, &indicator(&w), "f").unwrap();
            let norm = cert.norm().unwrap();
            assert!((norm - n as f64 / 4.0).abs() < 1e-6, "n={n} norm={norm}");
        }
    }

    #[test]
    fn zero_cocycle_has_zero_primitive() {
        let g = z_group();
        let w = strip(&g, 4);
        let cert = min_linf_primitive(&w, &Cochain::zero(&w, 2), "zero").unwrap();
        match cert.status {
            LpStatus::Primitive { m, norm } => {
                assert!(norm.abs() < 1e-9);
                assert!(m.norm_inf() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coboundary_target_is_capped_by_its_primitive() {
        let g = z2_group();
        let w = build_window(&g, &WindowSpec::Ball { radius: 2, rho: 1 }).unwrap();
        let h = seeded_relative_cochain(&w, 7);
        let z = coboundary(&w, &h).unwrap();
        let norm = min_linf_primitive(&w, &z, "dh").unwrap().norm().unwrap();
        assert!(norm <= h.norm_inf() + 1e-7);
    }

    #[test]
    fn growth_scan_examples() {
        let g = z_group();
        let fam = WindowFamily::Strip { step: Word::new(vec![Letter::hz(0, 1)]), rho: 1 };
        let scan = growth_scan(&g, &fam, &CocycleFamily::RelatorIndicator, &[4, 8, 16]).unwrap();
        let norms: Vec<f64> = scan.rows.iter().map(|r| r.norm.unwrap()).collect();
        for (n, want) in norms.iter().zip([1.0, 2.0, 4.0]) {
            assert!((n - want).abs() < 1e-6);
        }
        assert_eq!(scan.verdict, GrowthVerdict::LinearGrowthWitness);
        assert!((scan.slope - 0.25).abs() < 1e-6);
        let zero = growth_scan(&g, &fam, &CocycleFamily::Zero, &[4, 8, 16]).unwrap();
        assert_eq!(zero.verdict, GrowthVerdict::BoundedConsistent);
        let z2 = z2_group();
        let ball = WindowFamily::Ball { rho: 1 };
        let scan = growth_scan(&z2, &ball, &CocycleFamily::Coboundary { seed: 3 }, &[1, 2, 3]).unwrap();
        assert!(scan.rows.iter().all(|r| r.norm.unwrap() <= 1.0 + 1e-7));
        assert_eq!(scan.verdict, GrowthVerdict::BoundedConsistent);
    }

    fn lambda_edge(g: &Group, w: &Window, k: i64, model: usize) -> usize {
        w.index_of(&Cell::new(h1_pow(g, k), CellKind::LambdaEdge { model })).unwrap()
    }

    #[test]
    fn nu_examples() {
        let g = z_group();
        let w = strip(&g, 3);
        let m = centered_m(&g, &w, 0.0);
        let z = indicator(&w);
        let hedge = w
            .index_of(&Cell::new(Word::empty(), CellKind::HEdge { model: 0, elem: crate::presentation::Elem::Abelian(vec![1]) }))
            .unwrap();
        assert_eq!(nu(&w, &[(hedge, 1)], &m, &z, 1.0).unwrap(), 0.0);
        let path = vec![(lambda_edge(&g, &w, 0, 0), 1), (hedge, 1), (lambda_edge(&g, &w, 1, 0), -1)];
        assert!((nu(&w, &path, &m, &z, 1.0).unwrap() + 0.5).abs() < 1e-12);
        assert!(nu(&w, &[(hedge, 1), (hedge, 1)], &m, &z, 1.0).is_err());
    }

    #[test]
    fn windowed_max_nu_matches_exhaustive_enumeration() {
        let g = z_group();
        let w = strip(&g, 2);
        let m = centered_m(&g, &w, 1.0);
        let z = indicator(&w);
        let base = w.index_of(&Cell::new(Word::empty(), CellKind::Vertex)).unwrap();
        let (v, path) = windowed_max_nu(&w, &m, &z, 1.0, base, base, 0).unwrap();
        assert_eq!((v, path.len()), (0.0, 0));
        let target = w.index_of(&Cell::new(h1_pow(&g, 1), CellKind::Vertex)).unwrap();
        let mut last = f64::NEG_INFINITY;
        for cap in 3..=5 {
            let (best, path) = windowed_max_nu(&w, &m, &z, 1.0, base, target, cap).unwrap();
            assert!((nu(&w, &path, &m, &z, 1.0).unwrap() - best).abs() < 1e-12);
            // Brute force over all edge sequences of length ≤ cap with distinct vertices.
            let mut brute = f64::NEG_INFINITY;
            let ne = w.count(1);
            let mut stack: Vec<EdgePath> = vec![vec![]];
            while let Some(p) = stack.pop() {
                if let Ok(Some((s, t))) = path_endpoints(&w, &p) {
                    let mut seen = vec![s];
                    let mut simple = true;
                    for &(e, sg) in &p {
                        let (a, b) = w.ends[e];
                        let cur = if sg > 0 { b } else { a };
                        simple &= !seen.contains(&cur);
                        seen.push(cur);
                    }
                    if !simple || s != base {
                        continue;
                    }
                    if t == target {
                        brute = brute.max(nu(&w, &p, &m, &z, 1.0).unwrap());
                    }
                } else if !p.is_empty() {
                    continue;
                }
                if p.len() < cap {
                    for e in 0..ne {
                        for sg in [1i8, -1] {
                            let mut q = p.clone();
                            q.push((e, sg));
                            stack.push(q);
                        }
                    }
                }
            }
            assert!((brute - best).abs() < 1e-12, "cap {cap}: {brute} vs {best}");
            assert!(best >= last);
            last = best;
        }
    }

    #[test]
    fn crucial_echo_is_relative() {
        let g = z_group();
        let w = strip(&g, 2);
        let m = centered_m(&g, &w, 1.0);
        let z = indicator(&w);
        let echo = crucial_echo(&w, &m, &z, 2.0, 8).unwrap();
        assert!(echo.relative);
        let kc = Cochain { dim: 1, values: echo.k.clone() };
        let dk = coboundary(&w, &kc).unwrap();
        let dm = coboundary(&w, &m).unwrap();
        for f in w.interior_cells() {
            assert!((dk.values[f] + dm.values[f]).abs() < 1e-9);
        }
    }
}
