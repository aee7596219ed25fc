//! The whole pipeline over a prime field: quotient algebras, functor images,
//! and both round trips. The radical comes from the bound-quiver construction
//! (the trace-form route is characteristic-zero only and must refuse).

use std::collections::BTreeMap;

use quivalg::algebra::FiniteDimAlgebra;
use quivalg::connection::QuiverConnection;
use quivalg::equivalence::{p_connection, p_object, roundtrip_algebra, roundtrip_connection};
use quivalg::linalg::{Field, Matrix};
use quivalg::quiver::{AdmissibleIdeal, BoundQuiver, Path, PathVector, Quiver};

fn gf5() -> Field {
    Field::Prime(5)
}

fn loop_bq(field: Field) -> BoundQuiver {
    let quiver =
        Quiver::new(vec!["v".into()], vec![("x".into(), "v".into(), "v".into())]).unwrap();
    let gens = vec![PathVector::single(
        field,
        Path::from_edge_indices(vec![0, 0]),
        field.one(),
    )];
    let ideal = AdmissibleIdeal::new(&quiver, gens, 3, field).unwrap();
    BoundQuiver::new(quiver, ideal)
}

#[test]
fn quotient_algebra_over_gf5() {
    let bq = loop_bq(gf5());
    let img = p_object(&bq).unwrap();
    assert_eq!(img.data.dim(), 2);
    assert_eq!(img.data.rad().dim(), 1);
    assert_eq!(img.data.vertex_count(), 1);
}

#[test]
fn trace_form_radical_refuses_prime_fields() {
    let bq = loop_bq(gf5());
    let img = p_object(&bq).unwrap();
    let a: &FiniteDimAlgebra = img.data.algebra();
    assert!(a.radical().is_err());
}

#[test]
fn connection_round_trip_over_gf5() {
    let field = gf5();
    let bq = loop_bq(field);
    let mut gamma = BTreeMap::new();
    gamma.insert((0, 0), vec!["g".to_string()]);
    let mut u = BTreeMap::new();
    u.insert((0, 0), Matrix::from_i64(field, &[&[3]]));
    let c = QuiverConnection::new(bq.quiver.clone(), bq.quiver.clone(), gamma, u, field).unwrap();
    let img = p_connection(&c, &bq, &bq).unwrap();
    assert_eq!(img.bimodule.dim(), 2);
    let rt = roundtrip_connection(&c, &bq, &bq).unwrap();
    assert!(rt.iso.is_invertible());
    assert_eq!(rt.reconstructed.u_block(0, 0).unwrap().get(0, 0), &field.from_i64(3));
}

#[test]
fn algebra_round_trip_over_gf5() {
    let bq = loop_bq(gf5());
    let img = p_object(&bq).unwrap();
    let rt = roundtrip_algebra(&img.data).unwrap();
    assert_eq!(rt.iso.rows(), 2);
    assert!(rt.delta2_square_commutes);
    assert_eq!(rt.presentation.bound_quiver.ideal.bound(), 2);
}

#[test]
fn two_vertex_quiver_over_gf7() {
    // splitting over GF(7) by eigenvalue scan
    let field = Field::Prime(7);
    let quiver =
        Quiver::new(vec!["1".into(), "2".into()], vec![("a".into(), "1".into(), "2".into())])
            .unwrap();
    let ideal = AdmissibleIdeal::truncation(&quiver, 2, field).unwrap();
    let img = p_object(&BoundQuiver::new(quiver, ideal)).unwrap();
    assert_eq!(img.data.vertex_count(), 2);
    let rt = roundtrip_algebra(&img.data).unwrap();
    assert_eq!(rt.presentation.bound_quiver.quiver.edge_count(), 1);
}
