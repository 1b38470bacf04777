// The slot-vector simulator: exact arithmetic mod t, cyclic rotation, and
// a noise budget that runs out after too many multiplications.

use cssc_spmv::he::{HeBackend, HeParams, OpLedger, Simulator};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let sim = Simulator::new(HeParams::new(8, 65537)?)?;
    let t = sim.params().plaintext_modulus;
    let mut ops = OpLedger::new();

    let a = sim.encrypt(&sim.encode(&[1, 2, 3, 4])?, &mut ops);
    let b = sim.encrypt(&sim.encode(&[10, -20, 30, -40])?, &mut ops);

    let sum = sim.add(&a, &b, &mut ops);
    let prod = sim.mult(&a, &b, &mut ops);
    let rot = sim.rotate(&a, 1, &mut ops);

    let sum = sim.decrypt(&sum, &mut ops)?.to_signed(t);
    let prod = sim.decrypt(&prod, &mut ops)?.to_signed(t);
    let rot = sim.decrypt(&rot, &mut ops)?.to_signed(t);
    println!("a + b      = {sum:?}");
    println!("a * b      = {prod:?}");
    println!("rot(a, 1)  = {rot:?}");
    assert_eq!(sum[..4], [11, -18, 33, -36]);
    assert_eq!(prod[..4], [10, -40, 90, -160]);
    assert_eq!(rot, [2, 3, 4, 0, 0, 0, 0, 1]);

    // noise: each ct x ct product burns 33 bits of the 146 available
    let mut x = a.clone();
    print!("budget:");
    for _ in 0..5 {
        print!(" {}", sim.noise_budget_bits(&x));
        x = sim.mult(&x, &a, &mut ops);
    }
    println!(" {}", sim.noise_budget_bits(&x));
    assert!(sim.decrypt(&x, &mut ops).is_err());

    println!("{ops:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
