//! Spec texts behind the convenience subcommands.

/// Two photons on a beamsplitter, heralding a coincidence. With `sweep`,
/// the overlap runs from 0 to 1 in that many steps.
pub fn hom(reflectivity: f64, overlap: Option<f64>, sweep: Option<usize>) -> String {
    let mut s = format!("modes 2\ninput 1 1\nbs 0 1 {reflectivity}\nherald 0=1 1=1\n");
    if let Some(x) = overlap {
        s.push_str(&format!("overlap {x}\n"));
    }
    if let Some(k) = sweep {
        s.push_str(&format!("sweep overlap from 0 to 1 steps {k}\n"));
    }
    s
}

/// The heralded KLM CNOT on a computational-basis input.
pub fn cnot_herald(bits: &str, eta: f64, resolving: bool) -> String {
    let kind = if resolving { "resolving" } else { "threshold" };
    format!("qubits 2 path\nlogical {bits}\ndetector eta={eta} {kind}\ngate klm_cnot control=q0 target=q1\n")
}

/// Repeat-until-success CNOT by gate teleportation.
pub fn teleport_cnot(bits: &str, trials: u64, seed: u64) -> String {
    format!("qubits 2 path\nlogical {bits}\ngate teleported_cnot control=q0 target=q1\ntrials {trials} seed {seed}\n")
}

/// Arbitrary rotation on a five-node linear cluster; angles in degrees.
pub fn cluster_demo(angles: [f64; 3], seed: u64) -> String {
    let [a, b, c] = angles;
    format!(
        "cluster {{\n  nodes 5\n  edges 0-1 1-2 2-3 3-4\n  measure 0 angle 0\n  measure 1 angle {a}\n  measure 2 angle {b}\n  measure 3 angle {c}\n}}\nseed {seed}\n"
    )
}
