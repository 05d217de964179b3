//! Three-qubit GHZ circuit built by hand from controlled gates: runs,
//! samples and undoes it.

use genoquant::qsim::{Circuit, Control, Gate, GateKind, StateVector};

fn main() -> genoquant::Result<()> {
    let mut c = Circuit::new(3);
    c.push(Gate::h(2))?;
    c.push(Gate::cnot(2, 1)?)?;
    c.push(Gate::controlled(GateKind::X, 0, vec![Control::new(2, true), Control::new(1, true)])?)?;
    c.push(Gate::controlled(GateKind::Z, 0, vec![Control::new(1, true)])?)?;
    println!("{c}");
    println!("gates {:?}, CNOT estimate {}", c.gate_count().iter().collect::<Vec<_>>(), c.compiled_cnot_estimate());

    let mut s = StateVector::zero(3)?;
    c.run(&mut s)?;
    println!("{:?}", s.probabilities().to_map());
    println!("samples {:?}", s.sample(9, 1000)?);

    c.inverse().run(&mut s)?;
    println!("after inverse, <000|psi> = {:.3}", s.amplitude(0));
    Ok(())
}
