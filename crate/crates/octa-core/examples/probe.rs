// Scratch timing probe; removed before release.
use octa_core::circle;
use octa_core::constructions::omega9;
use octa_core::search::{min_edges, MethodChoice, SearchOptions};
use octa_core::shape::ClassShape;
use std::time::Instant;

fn main() {
    for sizes in [
        vec![2, 3, 3, 3],
        vec![3, 3, 3, 3],
        vec![2, 2, 3, 3, 3],
        vec![3, 3, 3, 3, 3],
    ] {
        let shape = ClassShape::new(sizes.clone()).unwrap();
        let mut opts = SearchOptions::default();
        opts.method = MethodChoice::SubsetSearch;
        let t = Instant::now();
        let out = min_edges(&shape, &opts).unwrap();
        println!(
            "{:?}: nu={:?} nodes={} in {:?}",
            sizes,
            out.nu(),
            out.nodes_explored,
            t.elapsed()
        );
    }

    for sizes in [
        vec![2, 2, 2, 3, 4],
        vec![2, 2, 3, 3, 4],
        vec![2, 3, 3, 3, 4],
        vec![3, 3, 3, 3, 4],
        vec![3, 3, 3, 4, 4],
        vec![3, 3, 4, 4, 4],
        vec![3, 4, 4, 4, 4],
        vec![4, 4, 4, 4, 4],
    ] {
        let shape = ClassShape::new(sizes.clone()).unwrap();
        let mut opts = SearchOptions::default();
        opts.method = MethodChoice::SubsetSearch;
        opts.node_budget = 600_000_000;
        opts.time_budget_ms = Some(90_000);
        let t = Instant::now();
        let out = min_edges(&shape, &opts).unwrap();
        println!(
            "{:?}: nu={:?} [{},{}] exhaustive={} nodes={} in {:?}",
            sizes,
            out.nu(),
            out.lower,
            out.upper.unwrap_or(0),
            out.exhaustive,
            out.nodes_explored,
            t.elapsed()
        );
        use std::io::Write;
        std::io::stdout().flush().ok();
    }

    let t = Instant::now();
    let verdict = circle::is_realizable_2d(&omega9(), false).unwrap();
    println!(
        "omega9 realizable={} types={} in {:?}",
        verdict.realizable,
        verdict.types_examined,
        t.elapsed()
    );

    let t = Instant::now();
    let mu = octa_core::geometry::mu_search(2, 10_000, 1).unwrap();
    println!("mu d=2: min={} in {:?}", mu.min_count, t.elapsed());
}
