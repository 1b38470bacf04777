// The transcript of a run passes the leakage audit; tampered transcripts
// do not.

use cssc_spmv::bench::synthetic::{random_matrix, random_vector};
use cssc_spmv::he::{HeParams, Simulator};
use cssc_spmv::pipeline::{audit_leakage, AuditRule, Message, MessageKind, PartyRole, Pipeline};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let sim = Simulator::new(HeParams::new(64, 65537)?)?;
    let m = random_matrix(20, 20, 60, 3);
    let v = random_vector(20, 100, 4);
    let r = Pipeline::new(&sim).run(&m, &v)?;

    let report = audit_leakage(&r.message_ledger);
    println!("honest run: passed={} ({} messages)", report.passed, report.messages_checked);
    assert!(report.passed);

    let mut leaky = r.message_ledger.clone();
    leaky.send(Message {
        from: PartyRole::ClientA,
        to: PartyRole::Cloud,
        kind: MessageKind::ColumnIndexPlain,
        payload_bytes: 64,
        ciphertext_count: 0,
    });
    let report = audit_leakage(&leaky);
    for v in &report.violations {
        println!("  {v}");
    }
    assert!(!report.passed);
    assert!(report.violations.iter().any(|v| v.rule == AuditRule::IndicesOnlyAToB));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
