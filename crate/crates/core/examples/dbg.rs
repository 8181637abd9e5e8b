use hypermatch_core::hypergraph::Hypergraph;
use hypermatch_core::partition::PipelineParams;
use hypermatch_core::pipeline::decide;
use hypermatch_core::rat;

fn main() {
    let edges: Vec<Vec<usize>> = (0..14)
        .flat_map(|a| ((a + 1)..14).map(move |b| vec![a, b]))
        .filter(|e| !(e[0] >= 8 && e[1] >= 8))
        .collect();
    let h = Hypergraph::new(14, 2, edges).unwrap();
    let mut p = PipelineParams::default();
    p.alpha = rat(1, 6);
    p.mu = rat(1, 100);
    p.beta = rat(1, 4);
    let d = decide(&h, 1, &p).unwrap();
    for s in &d.trace.stages {
        println!("{}: {}", s.stage, s.summary);
    }
}
