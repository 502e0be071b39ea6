//! The verification suite: one test per checkable criterion, each printing
//! its pass/fail line (run with `--nocapture` to see the lines as they
//! finish; `mcrt repro` prints the same lines from the CLI).

use mcrt::repro::*;

fn check(result: CriterionResult) {
    println!("{}", result.line());
    assert!(result.pass, "{}", result.line());
}

#[test]
fn criterion_01_adjacency_oracle_equivalence() {
    check(criterion_01_adjacency_oracle());
}

#[test]
fn criterion_02_triangulation_invariants() {
    check(criterion_02_triangulation());
}

#[test]
fn criterion_03_mean_interior_degree() {
    check(criterion_03_mean_degree());
}

#[test]
fn criterion_04_degree_tail_form() {
    check(criterion_04_degree_tail());
}

#[test]
fn criterion_05_harmonic_solver_oracle() {
    check(criterion_05_harmonic_solver());
}

#[test]
fn criterion_06_hitting_probability_crosscheck() {
    check(criterion_06_hitting_crosscheck());
}

#[test]
fn criterion_07_quenched_exit_law() {
    check(criterion_07_exit_law_vs_harmonic_measure());
}

#[test]
fn criterion_08_curve_metric_correctness() {
    check(criterion_08_cmp_correctness());
}

#[test]
fn criterion_09_embedded_walk_geometry() {
    check(criterion_09_walk_vs_brownian());
}

#[test]
fn criterion_10_face_size_decay() {
    check(criterion_10_face_decay());
}

#[test]
fn criterion_11_measure_self_consistency() {
    check(criterion_11_two_scale());
}

#[test]
fn criterion_12_performance() {
    check(criterion_12_performance());
}

/// Auxiliary trend check sharing the criterion fixtures: the longest jump
/// of the space-filling polyline shrinks as the grid refines.
#[test]
fn space_filling_jump_decay() {
    use mcrt::embed::space_filling_polyline;
    use mcrt::stats::median;
    let mut medians = Vec::new();
    for n in [1_000usize, 10_000, 100_000] {
        let jumps: Vec<f64> = (0..10u64)
            .map(|seed| {
                let emb = mcrt::repro::shared_disk_embedding(n, seed);
                let c = space_filling_polyline(&emb);
                c.points.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0f64, f64::max)
            })
            .collect();
        medians.push(median(&jumps));
    }
    println!("space-filling max jump medians: {medians:?}");
    assert!(medians[0] > medians[1] && medians[1] > medians[2], "{medians:?}");
}
