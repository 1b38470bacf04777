use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartyRole {
    ClientA,
    ClientB,
    Cloud,
}

impl fmt::Display for PartyRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartyRole::ClientA => "A",
            PartyRole::ClientB => "B",
            PartyRole::Cloud => "Cloud",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MessageKind {
    /// Encrypted chunks (A) or encrypted reorganized vector segments (B).
    CiphertextBatch,
    /// Flattened per-chunk column indices, in the clear.
    ColumnIndexPlain,
    /// Row map, in the clear; only sent when B holds the secret key.
    RowMapPlain,
    /// Chunk shapes `(r_i, c_i)`, in the clear.
    ChunkShapeMeta,
    /// Aggregated encrypted result.
    ResultCiphertext,
    /// Decrypted values. Never produced by the protocol itself; exists so
    /// that foreign transcripts carrying them can be audited.
    PlaintextValues,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub from: PartyRole,
    pub to: PartyRole,
    pub kind: MessageKind,
    pub payload_bytes: u64,
    pub ciphertext_count: usize,
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}->{} {:?} ({} bytes, {} ciphertexts)",
            self.from, self.to, self.kind, self.payload_bytes, self.ciphertext_count
        )
    }
}

/// Append-only transcript of one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageLedger {
    pub key_holder: PartyRole,
    messages: Vec<Message>,
}

impl MessageLedger {
    pub fn new(key_holder: PartyRole) -> Self {
        MessageLedger {
            key_holder,
            messages: Vec::new(),
        }
    }

    pub fn send(&mut self, message: Message) {
        self.messages.push(message);
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn extend(&mut self, other: &MessageLedger) {
        self.messages.extend_from_slice(&other.messages);
    }

    fn between(&self, from: PartyRole, to: PartyRole) -> impl Iterator<Item = &Message> {
        self.messages
            .iter()
            .filter(move |m| m.from == from && m.to == to)
    }

    pub fn bytes(&self, from: PartyRole, to: PartyRole) -> u64 {
        self.between(from, to).map(|m| m.payload_bytes).sum()
    }

    pub fn ciphertexts(&self, from: PartyRole, to: PartyRole) -> usize {
        self.between(from, to).map(|m| m.ciphertext_count).sum()
    }

    /// Ciphertexts moved between any two parties.
    pub fn total_ciphertexts(&self) -> usize {
        self.messages.iter().map(|m| m.ciphertext_count).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditRule {
    /// Only ciphertexts and chunk shapes may reach the cloud.
    CloudReceivesOnlyCiphertexts,
    /// Plaintext index structure flows only from A to B.
    IndicesOnlyAToB,
    /// Results and decrypted values reach only the key holder.
    ResultsOnlyToKeyHolder,
}

impl fmt::Display for AuditRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditRule::CloudReceivesOnlyCiphertexts => "cloud receives only ciphertexts and shapes",
            AuditRule::IndicesOnlyAToB => "plaintext indices flow only A->B",
            AuditRule::ResultsOnlyToKeyHolder => "results reach only the key holder",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditViolation {
    pub index: usize,
    pub rule: AuditRule,
    pub message: Message,
}

impl fmt::Display for AuditViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "message #{} [{}] violates: {}", self.index, self.message, self.rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub passed: bool,
    pub messages_checked: usize,
    pub violations: Vec<AuditViolation>,
}

/// Check a transcript against the semi-honest leakage profile.
pub fn audit_leakage(ledger: &MessageLedger) -> AuditReport {
    use MessageKind::*;

    let mut violations = Vec::new();
    for (index, m) in ledger.messages().iter().enumerate() {
        let mut flag = |rule| {
            violations.push(AuditViolation {
                index,
                rule,
                message: m.clone(),
            })
        };
        if m.to == PartyRole::Cloud && !matches!(m.kind, CiphertextBatch | ChunkShapeMeta) {
            flag(AuditRule::CloudReceivesOnlyCiphertexts);
        }
        if matches!(m.kind, ColumnIndexPlain | RowMapPlain)
            && (m.from, m.to) != (PartyRole::ClientA, PartyRole::ClientB)
        {
            flag(AuditRule::IndicesOnlyAToB);
        }
        if matches!(m.kind, ResultCiphertext | PlaintextValues) && m.to != ledger.key_holder {
            flag(AuditRule::ResultsOnlyToKeyHolder);
        }
    }
    AuditReport {
        passed: violations.is_empty(),
        messages_checked: ledger.messages().len(),
        violations,
    }
}
