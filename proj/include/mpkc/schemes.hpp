#pragma once

#include <map>
#include <set>

#include "mpkc/parametric.hpp"
#include "mpkc/rng.hpp"

namespace mpkc {

// Scheme shape: message arities, padding sizes and the base field. Message
// elements are sampled from the unit group G = F*.
struct SchemeParams {
  enum class Kind : u8 { pkc, signature };
  Kind kind = Kind::pkc;
  u64 mu = 1, nu = 1, kappa = 0, lambda = 0;
  u64 K = 0, L = 0, tau = 0;
  u64 field_p = 2, field_n = 3;

  void validate() const;
  bool operator==(const SchemeParams&) const = default;
};

enum class DecryptStatus : u8 { ok, integrity_failure, inversion_failure };

struct DecryptOutcome {
  DecryptStatus status = DecryptStatus::inversion_failure;
  std::vector<u64> plaintext;
};

// Public lookup table: the composed map (x, omega) -> P(F(x, omega), x),
// stored exhaustively with the pad slots explicit. Contains no inverse data.
struct PkcPublicKey {
  SchemeParams params;
  Domain dom;
  std::vector<u64> table;  // row-major over G^mu x G^kappa, nu entries per row

  std::vector<u64> encrypt(std::span<const u64> x, std::span<const u64> omega) const;
};

// Back-substitution data: the structured injection and the hidden keys.
struct PkcPrivateKey {
  SchemeParams params;
  Domain dom;
  TriangularMap P;
  std::vector<Expr> hidden;  // lambda components over (x..., omega...)
  std::shared_ptr<const Interpretation> interp;

  std::vector<u64> hidden_values(std::span<const u64> x, std::span<const u64> omega) const;
  DecryptOutcome decrypt(std::span<const u64> eps, std::span<const u64> omega) const;
};

struct PkcKeyPair {
  PkcPublicKey pub;
  PkcPrivateKey priv;
};

PkcKeyPair pkc_keygen(const SchemeParams& params, u64 seed);

// Signature verification table V: plain-message components of P only.
struct SigPublicKey {
  SchemeParams params;
  Domain dom;
  std::vector<u64> plain_table;  // row-major over G^nu, mu entries per row

  std::vector<u64> verify(std::span<const u64> eps) const;
};

// Signature authentication table A: the full maps P, H, F, Q, R as value
// tables; registered with the TAV, still free of inverse data.
struct SigAuthTable {
  SchemeParams params;
  Domain dom;
  std::vector<u64> p_full;   // G^nu -> L+mu
  std::vector<u64> f_table;  // G^(mu+kappa) -> L
  std::vector<u64> q_table;  // G^kappa -> K
  std::vector<u64> r_table;  // G^lambda -> L
  std::vector<u64> h_table;  // G^(lambda+mu+kappa) -> tau

  std::vector<u64> p_of(std::span<const u64> eps) const;
  std::vector<u64> f_of(std::span<const u64> x, std::span<const u64> omega) const;
  std::vector<u64> q_of(std::span<const u64> omega) const;
  std::vector<u64> r_of(std::span<const u64> z) const;
  std::vector<u64> h_of(std::span<const u64> z, std::span<const u64> x,
                        std::span<const u64> omega) const;
};

// Right inverses of P, Q, R (through their private live-class data), the
// hidden keys, and the authenticator.
struct SigPrivateKey {
  SchemeParams params;
  Domain dom;
  ParametricInjection P, Q, R;
  TriangularMap H;           // on lambda+mu+kappa coordinates; first tau used
  std::vector<Expr> hidden;  // F components over (x..., omega...)
  std::shared_ptr<const Interpretation> interp;

  std::vector<u64> hidden_values(std::span<const u64> x, std::span<const u64> omega) const;
  std::vector<u64> authenticator(std::span<const u64> z, std::span<const u64> x,
                                 std::span<const u64> omega) const;
};

struct SigKeySet {
  SigPublicKey pub;
  SigAuthTable auth;
  SigPrivateKey priv;
};

SigKeySet sig_keygen(const SchemeParams& params, u64 seed);

struct Transaction {
  u64 id = 0;
  std::vector<u64> omega_prime;  // extra padding message in G^K
  u64 issued_at = 0;
  u64 expires_at = 0;
  std::string gist;  // stored alongside, unencrypted
};

struct SigMessage {
  std::vector<u64> eps, z, delta, omega;
  u64 txn_id = 0;
};

struct SigClaim {
  std::vector<u64> eps, z, delta, x, omega;
  u64 txn_id = 0;
};

struct AuthResult {
  bool accepted = false;
  std::string reason;  // first failed predicate on rejection
};

// Trusted authentication verifier: issues transactions (fresh extra padding
// messages) and adjudicates claims against table A. State mutations append
// length-prefixed records to the journal file when one is configured.
class Tav {
 public:
  Tav(SigAuthTable table, u64 seed, std::string journal_path = "");

  const Transaction& reserve(const std::string& gist, u64 validity_window = 1000);
  const Transaction* find(u64 id) const;
  AuthResult authenticate(const SigClaim& claim);

  u64 now() const { return clock_; }
  const SigAuthTable& table() const { return table_; }

  // Rebuild transaction state from an existing journal.
  void replay_journal();

 private:
  void journal_record(const std::string& kind, const Transaction& txn,
                      const std::string& extra);
  SigAuthTable table_;
  SeededRng rng_;
  u64 clock_ = 0;
  u64 next_id_ = 1;
  std::map<u64, Transaction> txns_;
  std::set<u64> consumed_;
  std::string journal_path_;
};

// Signer-side state: private key plus the used-transaction ledger (each
// reservation signs at most once).
class Signer {
 public:
  explicit Signer(const SigPrivateKey& priv) : priv_(&priv) {}
  SigMessage sign(std::span<const u64> x, const Transaction& txn, const Tav& tav);

 private:
  const SigPrivateKey* priv_;
  std::set<u64> used_;
};

}  // namespace mpkc
