#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpkc/keyio.hpp"
#include "mpkc/oracle.hpp"

using namespace mpkc;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;   // integrity or verification rejection
constexpr int kUsage = 2;      // malformed invocation or inputs
constexpr int kInversion = 3;  // inversion failure / out-of-domain data

// When a payload claims stdout (--out -), the record is suppressed so the
// stream stays pipeable.
void emit_record(const ordered_json& j, const std::string& out_path = "") {
  if (out_path == "-") return;
  std::cout << j.dump() << "\n";
}

// "mu=2,nu=3,kappa=1,field=2^3[,lambda=..,K=..,L=..,tau=..]"
SchemeParams parse_params(const std::string& text, SchemeParams::Kind kind) {
  SchemeParams p;
  p.kind = kind;
  p.lambda = UINT64_MAX;  // default lambda = nu - mu for pkc
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    pos = end + 1;
    size_t eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--params", "expected key=value: " + item);
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "field") {
      size_t hat = value.find('^');
      p.field_p = std::stoull(value.substr(0, hat));
      p.field_n = hat == std::string::npos ? 1 : std::stoull(value.substr(hat + 1));
    } else if (key == "mu") {
      p.mu = std::stoull(value);
    } else if (key == "nu") {
      p.nu = std::stoull(value);
    } else if (key == "kappa") {
      p.kappa = std::stoull(value);
    } else if (key == "lambda") {
      p.lambda = std::stoull(value);
    } else if (key == "K") {
      p.K = std::stoull(value);
    } else if (key == "L") {
      p.L = std::stoull(value);
    } else if (key == "tau") {
      p.tau = std::stoull(value);
    } else {
      throw CLI::ValidationError("--params", "unknown key: " + key);
    }
  }
  if (p.lambda == UINT64_MAX) p.lambda = p.nu - p.mu;
  p.validate();
  return p;
}

std::string read_payload(const std::string& path) {
  if (path == "-" || path.empty()) {
    return std::string(std::istreambuf_iterator<char>(std::cin),
                       std::istreambuf_iterator<char>());
  }
  std::vector<u8> bytes = keyio::read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_payload(const std::string& path, const std::string& body) {
  if (path.empty()) return;  // record on stdout already carries the data
  if (path == "-") {
    std::cout << body;
    return;
  }
  std::vector<u8> bytes(body.begin(), body.end());
  keyio::write_file(path, bytes);
}

u64 hex_nibbles_per_element(u64 q) {
  u64 w = 1;
  while ((u64(1) << (4 * w)) < q) ++w;
  return w;
}

std::vector<u64> parse_pad_hex(const std::string& hex, u64 q, u64 kappa) {
  u64 w = hex_nibbles_per_element(q);
  if (hex.size() != w * kappa)
    throw EvalError("pad must be " + std::to_string(w * kappa) + " hex digits");
  std::vector<u64> out(kappa);
  for (u64 i = 0; i < kappa; ++i) {
    u64 v = 0;
    for (u64 k = 0; k < w; ++k) {
      char c = hex[i * w + k];
      u64 d = c >= '0' && c <= '9'   ? u64(c - '0')
              : c >= 'a' && c <= 'f' ? u64(c - 'a' + 10)
              : c >= 'A' && c <= 'F' ? u64(c - 'A' + 10)
                                     : UINT64_MAX;
      if (d == UINT64_MAX) throw EvalError("pad is not a hex string");
      v = (v << 4) | d;
    }
    out[i] = v;
  }
  return out;
}

Tav load_tav(const SigAuthTable& table, u64 seed, const std::string& journal) {
  Tav tav(table, seed, journal);
  tav.replay_journal();
  return tav;
}

struct Args {
  std::string params, key, in, out, pad, tav, gist = "cli reservation";
  u64 seed = 0;
  u64 txn = 0;
};

int run_keygen(const Args& a) {
  SchemeParams params = parse_params(a.params, SchemeParams::Kind::pkc);
  PkcKeyPair kp = pkc_keygen(params, a.seed);
  std::string pub_path = a.out + ".pub.key", prv_path = a.out + ".prv.key";
  keyio::write_file(pub_path, keyio::emit_pkc_public(kp.pub));
  keyio::write_file(prv_path, keyio::emit_pkc_private(kp));
  ordered_json rec;
  rec["command"] = "keygen";
  rec["public"] = pub_path;
  rec["private"] = prv_path;
  rec["rows"] = kp.pub.table.size() / params.nu;
  emit_record(rec);
  return kOk;
}

int run_encrypt(const Args& a) {
  PkcPublicKey pub = keyio::parse_pkc_public(keyio::read_file(a.key));
  std::vector<u64> x = keyio::parse_message(read_payload(a.in));
  std::vector<u64> omega = parse_pad_hex(a.pad, pub.dom.size(), pub.params.kappa);
  std::vector<u64> eps;
  try {
    eps = pub.encrypt(x, omega);
  } catch (const EvalError& e) {
    std::cerr << e.what() << "\n";
    return kInversion;
  }
  write_payload(a.out, keyio::emit_message(eps));
  ordered_json rec;
  rec["command"] = "encrypt";
  rec["ciphertext"] = eps;
  emit_record(rec, a.out);
  return kOk;
}

int run_decrypt(const Args& a) {
  PkcPrivateKey prv = keyio::parse_pkc_private(keyio::read_file(a.key));
  std::vector<u64> eps = keyio::parse_message(read_payload(a.in));
  std::vector<u64> omega = parse_pad_hex(a.pad, prv.dom.size(), prv.params.kappa);
  DecryptOutcome out = prv.decrypt(eps, omega);
  ordered_json rec;
  rec["command"] = "decrypt";
  switch (out.status) {
    case DecryptStatus::ok:
      rec["status"] = "ok";
      rec["plaintext"] = out.plaintext;
      emit_record(rec, a.out);
      write_payload(a.out, keyio::emit_message(out.plaintext));
      return kOk;
    case DecryptStatus::integrity_failure:
      rec["status"] = "integrity-failure";
      emit_record(rec);
      return kRejected;
    case DecryptStatus::inversion_failure:
      rec["status"] = "inversion-failure";
      emit_record(rec);
      return kInversion;
  }
  return kUsage;
}

int run_sig_keygen(const Args& a) {
  SchemeParams params = parse_params(a.params, SchemeParams::Kind::signature);
  SigKeySet ks = sig_keygen(params, a.seed);
  std::string vrf = a.out + ".vrf.key", auth = a.out + ".auth.key",
              prv = a.out + ".prv.key";
  keyio::write_file(vrf, keyio::emit_sig_verification(ks.pub));
  keyio::write_file(auth, keyio::emit_sig_authentication(ks.auth));
  keyio::write_file(prv, keyio::emit_sig_private(ks));
  ordered_json rec;
  rec["command"] = "sig-keygen";
  rec["verification"] = vrf;
  rec["authentication"] = auth;
  rec["private"] = prv;
  emit_record(rec);
  return kOk;
}

int run_reserve(const Args& a) {
  SigAuthTable table = keyio::parse_sig_authentication(keyio::read_file(a.key));
  Tav tav = load_tav(table, a.seed, a.tav);
  const Transaction& txn = tav.reserve(a.gist);
  ordered_json rec;
  rec["command"] = "reserve";
  rec["txn"] = txn.id;
  rec["omega_prime"] = txn.omega_prime;
  rec["issued_at"] = txn.issued_at;
  rec["expires_at"] = txn.expires_at;
  emit_record(rec);
  return kOk;
}

int run_sign(const Args& a) {
  SigKeySet keys = keyio::parse_sig_private(keyio::read_file(a.key));
  Tav tav = load_tav(keys.auth, a.seed, a.tav);
  const Transaction* txn = tav.find(a.txn);
  if (!txn) {
    std::cerr << "transaction " << a.txn << " not found in the journal\n";
    return kUsage;
  }
  std::vector<u64> x = keyio::parse_message(read_payload(a.in));
  Signer signer(keys.priv);
  SigMessage sig;
  try {
    sig = signer.sign(x, *txn, tav);
  } catch (const RejectionError& e) {
    std::cerr << e.what() << "\n";
    return kRejected;
  }
  SigClaim claim{sig.eps, sig.z, sig.delta, x, sig.omega, sig.txn_id};
  write_payload(a.out, keyio::emit_claim(claim) + "\n");
  ordered_json rec;
  rec["command"] = "sign";
  rec["eps"] = sig.eps;
  rec["txn"] = sig.txn_id;
  emit_record(rec, a.out);
  return kOk;
}

int run_verify(const Args& a) {
  SigPublicKey pub = keyio::parse_sig_verification(keyio::read_file(a.key));
  SigClaim claim = keyio::parse_claim(read_payload(a.in));
  std::vector<u64> x;
  try {
    x = pub.verify(claim.eps);
  } catch (const EvalError& e) {
    std::cerr << e.what() << "\n";
    return kInversion;
  }
  ordered_json rec;
  rec["command"] = "verify";
  rec["plaintext"] = x;
  emit_record(rec, a.out);
  if (!a.out.empty()) write_payload(a.out, keyio::emit_message(x));
  return kOk;
}

int run_authenticate(const Args& a) {
  SigAuthTable table = keyio::parse_sig_authentication(keyio::read_file(a.key));
  Tav tav = load_tav(table, a.seed, a.tav);
  SigClaim claim = keyio::parse_claim(read_payload(a.in));
  AuthResult res = tav.authenticate(claim);
  ordered_json rec;
  rec["command"] = "authenticate";
  rec["accepted"] = res.accepted;
  if (!res.accepted) rec["reason"] = res.reason;
  emit_record(rec);
  return res.accepted ? kOk : kRejected;
}

int run_audit(const Args& a) {
  std::vector<u8> bytes = keyio::read_file(a.key);
  keyio::KeyFileContent content = keyio::key_file_parse(bytes);
  ordered_json rec;
  rec["command"] = "audit";
  rec["kind"] = content.kind;

  if (content.kind == "pkc-public" || content.kind == "pkc-private") {
    PkcPublicKey pub = keyio::parse_pkc_public(bytes);
    ElemSet units = ElemSet::units_of(pub.dom);
    DomainGrid joint = DomainGrid::uniform(
        units, static_cast<u32>(pub.params.mu + pub.params.kappa));
    // the lookup map is injective in the plaintext for every fixed pad; the
    // pads intentionally collide (fat hidden-key fibers)
    DomainGrid wg = DomainGrid::uniform(units, static_cast<u32>(pub.params.kappa));
    bool injective = true;
    for (u64 wi = 0; wi < wg.total() && injective; ++wi) {
      std::vector<u64> w = wg.point(wi);
      DomainGrid xg = DomainGrid::uniform(units, static_cast<u32>(pub.params.mu));
      auto verdict = exhaustive_bijectivity(
          [&](std::span<const u64> x) { return pub.encrypt(x, w); }, xg);
      injective = verdict.injective;
    }
    rec["lookup_rows"] = joint.total();
    rec["pad_slices"] = wg.total();
    rec["lookup_injective"] = injective;
    if (content.kind == "pkc-private") {
      PkcPrivateKey prv = keyio::parse_pkc_private(bytes);
      u64 roundtrips = 0;
      for (u64 r = 0; r < joint.total(); ++r) {
        std::vector<u64> pt = joint.point(r);
        std::span<const u64> x(pt.data(), prv.params.mu);
        std::span<const u64> w(pt.data() + prv.params.mu, prv.params.kappa);
        DecryptOutcome out = prv.decrypt(pub.encrypt(x, w), w);
        if (out.status != DecryptStatus::ok ||
            out.plaintext != std::vector<u64>(x.begin(), x.end())) {
          rec["roundtrip_failures"] = true;
          emit_record(rec);
          return kRejected;
        }
        ++roundtrips;
      }
      rec["roundtrips"] = roundtrips;
      if (prv.params.lambda >= 1) {
        DomainGrid xg = DomainGrid::uniform(units, static_cast<u32>(prv.params.mu));
        DomainGrid wg = DomainGrid::uniform(units, static_cast<u32>(prv.params.kappa));
        auto census = preimage_census(
            [&](std::span<const u64> args) {
              return prv.hidden_values(args.subspan(0, prv.params.mu),
                                       args.subspan(prv.params.mu));
            },
            xg, wg, prv.dom.size());
        rec["census_min"] = census.min_nonzero;
        rec["census_max"] = census.max_count;
        rec["census_entries"] = census.counts.size();
      }
    }
    emit_record(rec);
    return injective ? kOk : kRejected;
  }

  if (content.kind == "sig-verification") {
    SigPublicKey pub = keyio::parse_sig_verification(bytes);
    rec["plain_rows"] = pub.plain_table.size() / pub.params.mu;
    emit_record(rec);
    return kOk;
  }

  if (content.kind == "sig-authentication" || content.kind == "sig-private") {
    SigAuthTable table = keyio::parse_sig_authentication(bytes);
    ElemSet units = ElemSet::units_of(table.dom);
    u64 g = units.size();
    auto image_count = [&](const std::vector<u64>& t, u64 in_arity, u64 out_arity) {
      u64 rows = 1;
      for (u64 i = 0; i < in_arity; ++i) rows *= g;
      std::set<u64> seen;
      for (u64 r = 0; r < rows; ++r) {
        u64 key = 0;
        for (u64 c = 0; c < out_arity; ++c)
          key = key * table.dom.size() + t[r * out_arity + c];
        seen.insert(key);
      }
      return seen.size();
    };
    u64 want_p = 1, want_q = 1, want_r = 1;
    for (u64 i = 0; i < table.params.L + table.params.mu; ++i) want_p *= g;
    for (u64 i = 0; i < table.params.K; ++i) want_q *= g;
    for (u64 i = 0; i < table.params.L; ++i) want_r *= g;
    u64 got_p = image_count(table.p_full, table.params.nu, table.params.L + table.params.mu);
    u64 got_q = image_count(table.q_table, table.params.kappa, table.params.K);
    u64 got_r = image_count(table.r_table, table.params.lambda, table.params.L);
    rec["p_image"] = got_p;
    rec["q_image"] = got_q;
    rec["r_image"] = got_r;
    rec["p_surjective"] = got_p == want_p;
    rec["q_surjective"] = got_q == want_q;
    rec["r_surjective"] = got_r == want_r;
    bool ok = got_p == want_p && got_q == want_q && got_r == want_r;
    if (content.kind == "sig-private") {
      SigKeySet keys = keyio::parse_sig_private(bytes);
      keys.priv.P.certify();
      keys.priv.Q.certify();
      keys.priv.R.certify();
      rec["injections_certified"] = true;
    }
    emit_record(rec);
    return ok ? kOk : kRejected;
  }

  std::cerr << "unknown key kind: " << content.kind << "\n";
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-algebra multivariate encryption and signature toolkit"};
  app.require_subcommand(1);
  Args a;

  auto add_common = [&](CLI::App* cmd, bool key, bool in, bool out, bool pad) {
    cmd->add_option("--seed", a.seed, "deterministic seed");
    if (key) cmd->add_option("--key", a.key, "key file")->required();
    if (in) cmd->add_option("--in", a.in, "input file ('-' for stdin)");
    if (out) cmd->add_option("--out", a.out, "output file");
    if (pad) cmd->add_option("--pad", a.pad, "padding message, hex digits");
  };

  CLI::App* keygen = app.add_subcommand("keygen", "generate a pkc key pair");
  keygen->add_option("--params", a.params, "mu=,nu=,kappa=,field=p^n")->required();
  keygen->add_option("--out", a.out, "output base path")->required();
  keygen->add_option("--seed", a.seed, "deterministic seed");

  CLI::App* encrypt = app.add_subcommand("encrypt", "encrypt a message");
  add_common(encrypt, true, true, true, true);

  CLI::App* decrypt = app.add_subcommand("decrypt", "decrypt a ciphertext");
  add_common(decrypt, true, true, true, true);

  CLI::App* sig_keygen = app.add_subcommand("sig-keygen", "generate signature keys");
  sig_keygen->add_option("--params", a.params, "mu=,nu=,kappa=,lambda=,K=,L=,tau=,field=p^n")
      ->required();
  sig_keygen->add_option("--out", a.out, "output base path")->required();
  sig_keygen->add_option("--seed", a.seed, "deterministic seed");

  CLI::App* reserve = app.add_subcommand("reserve", "reserve a TAV transaction");
  add_common(reserve, true, false, false, false);
  reserve->add_option("--tav", a.tav, "TAV journal file")->required();
  reserve->add_option("--gist", a.gist, "transaction gist");

  CLI::App* sign = app.add_subcommand("sign", "sign a message under a reservation");
  add_common(sign, true, true, true, false);
  sign->add_option("--tav", a.tav, "TAV journal file")->required();
  sign->add_option("--txn", a.txn, "transaction id")->required();

  CLI::App* verify = app.add_subcommand("verify", "recover the plaintext of a claim");
  add_common(verify, true, true, true, false);

  CLI::App* authenticate = app.add_subcommand("authenticate", "adjudicate a claim");
  add_common(authenticate, true, true, false, false);
  authenticate->add_option("--tav", a.tav, "TAV journal file")->required();

  CLI::App* audit = app.add_subcommand("audit", "re-run key certifications");
  add_common(audit, true, false, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (keygen->parsed()) return run_keygen(a);
    if (encrypt->parsed()) return run_encrypt(a);
    if (decrypt->parsed()) return run_decrypt(a);
    if (sig_keygen->parsed()) return run_sig_keygen(a);
    if (reserve->parsed()) return run_reserve(a);
    if (sign->parsed()) return run_sign(a);
    if (verify->parsed()) return run_verify(a);
    if (authenticate->parsed()) return run_authenticate(a);
    if (audit->parsed()) return run_audit(a);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
