//! Times the full PD/HL/HR suite on every uniform matroid with at most seven elements.

use std::time::Instant;

use hodgelab::chow::ChowRing;
use hodgelab::hodge::{kahler_family, Verifier};
use hodgelab::matroid::Matroid;

fn main() {
    let total = Instant::now();
    for n in 1..=7 {
        for r in 1..=n {
            let m = Matroid::uniform(r, n).unwrap();
            let t = Instant::now();
            let ring = ChowRing::build(&m).unwrap();
            let built = t.elapsed();
            let fam = kahler_family(&ring, 5, 7).unwrap();
            let v = Verifier::new(&ring, format!("U({r},{n})"));
            let reports = v.verify_all(&fam).unwrap();
            let failed = reports.iter().filter(|r| !r.passed).count();
            println!(
                "U({r},{n}) dims {:?} build {:?} total {:?} checks {} failed {}",
                ring.dims(),
                built,
                t.elapsed(),
                reports.len(),
                failed
            );
        }
    }
    println!("all {:?}", total.elapsed());
}
