use hypspec::curves::*;
use hypspec::surface::{FenchelNielsen, PantsGraph, Surface};
use hypspec::walk;

fn main() {
    let graph = PantsGraph::theta(2).unwrap();
    let fn_data = FenchelNielsen::new(graph, vec![2.0, 2.5, 3.0], vec![0.1, 0.2, 0.3]).unwrap();
    let s = Surface::build(&fn_data).unwrap();
    let alpha = s.pants_curve(1).clone();
    let gamma = geodesic_rep(&s, &s.stable_classes()[0].clone()).unwrap();
    let n = 8i64;
    let spec = TwistSpec::single(&s, alpha.clone(), n).unwrap();
    let twisted = dehn_twist(&s, &gamma.class, &spec).unwrap();
    let tgeo = geodesic_rep(&s, &twisted).unwrap();
    let recs = walk::crossings(&s, &gamma, &tgeo, &[]).unwrap();
    println!("word={}", s.format_class(&twisted));
    println!("count={} (gamma len {:.6}, T len {:.6})", recs.len(), gamma.length, tgeo.length);
    for r in &recs { println!("  sb={:.9} sp={:.9} unw={:.9} ang={:.9} fr={} sign={}", r.s_base, r.s_partner, r.unwrapped, r.angle, r.frame, r.sign); }
}
