use certify::*;
use cf_core::*;

fn main() {
    let t0 = std::time::Instant::now();
    // isolate: trigger search only
    let base = subshift::ForbiddenSet::from_strs(&["131","312","313"], 3).unwrap();
    let mut engine = Engine::new(&base, EngineCfg { node_cap: 3000, ..Default::default() });
    let wit = parse_word("<111331113333*>").unwrap();
    let (m, _, _) = cf_core::dp::markov_of_biseq(&wit).unwrap();
    let root = Node::root(Word::parse("3111333").unwrap().digits().to_vec(), 0);
    let out = engine.run(vec![root], &Goal::MinAtLeast { bound: m.lo.clone() });
    println!("trigger outcome: {:?}", out);
    println!("trigger transcript: {:?}", engine.transcript);
    println!("elapsed: {:?}", t0.elapsed());
}
