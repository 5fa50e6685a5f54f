#include "mpkc/keyio.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"

namespace mpkc::keyio {

namespace {

using ordered_json = nlohmann::ordered_json;
constexpr char kMagic[4] = {'M', 'P', 'K', 'F'};
constexpr u32 kVersion = 1;

void put_u32(std::vector<u8>& out, u32 v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<u8>(v >> (8 * i)));
}

void put_u64(std::vector<u8>& out, u64 v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<u8>(v >> (8 * i)));
}

void put_bytes(std::vector<u8>& out, std::string_view s) {
  out.insert(out.end(), s.begin(), s.end());
}

struct Cursor {
  std::span<const u8> bytes;
  size_t pos = 0;
  void need(size_t n) {
    if (pos + n > bytes.size()) throw RejectionError("key file truncated");
  }
  u32 u32le() {
    need(4);
    u32 v = 0;
    for (int i = 0; i < 4; ++i) v |= u32(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  u64 u64le() {
    need(8);
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= u64(bytes[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  std::string str(size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes.data() + pos), n);
    pos += n;
    return s;
  }
};

}  // namespace

u64 fnv1a(std::span<const u8> bytes) {
  u64 h = 0xcbf29ce484222325ULL;
  for (u8 b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const Section* KeyFileContent::find(const std::string& name) const {
  for (const Section& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<u8> key_file_emit(const KeyFileContent& content) {
  std::vector<u8> out;
  put_bytes(out, std::string_view(kMagic, 4));
  put_u32(out, content.version);
  put_u32(out, static_cast<u32>(content.kind.size()));
  put_bytes(out, content.kind);
  put_u32(out, static_cast<u32>(content.sections.size()));
  for (const Section& s : content.sections) {
    put_u32(out, static_cast<u32>(s.name.size()));
    put_bytes(out, s.name);
    put_u64(out, s.body.size());
    put_bytes(out, s.body);
  }
  put_u64(out, fnv1a(out));
  return out;
}

KeyFileContent key_file_parse(std::span<const u8> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw RejectionError("not a key file");
  if (bytes.size() < 12) throw RejectionError("key file truncated");
  u64 stored = 0;
  for (int i = 0; i < 8; ++i)
    stored |= u64(bytes[bytes.size() - 8 + i]) << (8 * i);
  if (fnv1a(bytes.subspan(0, bytes.size() - 8)) != stored)
    throw RejectionError("key file checksum failure");

  Cursor c{bytes.subspan(0, bytes.size() - 8), 4};
  KeyFileContent content;
  content.version = c.u32le();
  if (content.version != kVersion) throw RejectionError("key file version mismatch");
  content.kind = c.str(c.u32le());
  u32 count = c.u32le();
  for (u32 i = 0; i < count; ++i) {
    Section s;
    s.name = c.str(c.u32le());
    u64 len = c.u64le();
    s.body = c.str(len);
    content.sections.push_back(std::move(s));
  }
  if (c.pos != c.bytes.size()) throw RejectionError("key file truncated");
  return content;
}

void write_file(const std::string& path, std::span<const u8> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw EvalError("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

std::vector<u8> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EvalError("cannot open file: " + path);
  return std::vector<u8>(std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>());
}

namespace {

// ---- JSON helpers for the algebra objects ----

ordered_json params_json(const SchemeParams& p) {
  ordered_json j;
  j["kind"] = p.kind == SchemeParams::Kind::pkc ? "pkc" : "signature";
  j["mu"] = p.mu;
  j["nu"] = p.nu;
  j["kappa"] = p.kappa;
  j["lambda"] = p.lambda;
  j["K"] = p.K;
  j["L"] = p.L;
  j["tau"] = p.tau;
  j["field_p"] = p.field_p;
  j["field_n"] = p.field_n;
  return j;
}

SchemeParams params_from(const ordered_json& j) {
  SchemeParams p;
  p.kind = j.at("kind") == "pkc" ? SchemeParams::Kind::pkc : SchemeParams::Kind::signature;
  p.mu = j.at("mu");
  p.nu = j.at("nu");
  p.kappa = j.at("kappa");
  p.lambda = j.at("lambda");
  p.K = j.at("K");
  p.L = j.at("L");
  p.tau = j.at("tau");
  p.field_p = j.at("field_p");
  p.field_n = j.at("field_n");
  return p;
}

ordered_json domain_json(const Domain& dom) {
  ordered_json j;
  const FieldSpec& f = dom.field();
  j["p"] = f.p;
  j["n"] = f.n;
  j["modulus_poly"] = f.modulus_poly;
  j["generator"] = f.generator;
  return j;
}

Domain domain_from(const ordered_json& j) {
  FieldSpec f = FieldSpec::make(j.at("p"), j.at("n"),
                                j.at("modulus_poly").get<std::vector<u64>>());
  if (f.generator != j.at("generator").get<u64>())
    throw RejectionError("generator mismatch in key file");
  return Domain(std::move(f));
}

struct KeyContext {
  Domain dom;
  std::shared_ptr<Interpretation> interp;
};

ordered_json elemset_json(const ElemSet& s) {
  ordered_json j;
  switch (s.kind()) {
    case ElemSet::Kind::all: j["kind"] = "all"; break;
    case ElemSet::Kind::units: j["kind"] = "units"; break;
    case ElemSet::Kind::explicit_list:
      j["kind"] = "list";
      j["elems"] = s.elements();
      break;
  }
  return j;
}

ElemSet elemset_from(const ordered_json& j, const KeyContext& ctx) {
  std::string kind = j.at("kind");
  if (kind == "all") return ElemSet::all_of(ctx.dom);
  if (kind == "units") return ElemSet::units_of(ctx.dom);
  return ElemSet::listed(ctx.dom, j.at("elems").get<std::vector<u64>>());
}

ordered_json evaluator_json(const Evaluator& e) {
  ordered_json j;
  switch (e.kind()) {
    case Evaluator::Kind::poly:
      j["kind"] = "poly";
      j["coeffs"] = e.poly().coeffs();
      break;
    case Evaluator::Kind::expr:
      j["kind"] = "expr";
      j["expr"] = expr_to_text(e.expr());
      break;
    case Evaluator::Kind::table:
      j["kind"] = "table";
      j["domain"] = elemset_json(e.table_domain());
      j["values"] = e.table();
      break;
  }
  return j;
}

Evaluator evaluator_from(const ordered_json& j, const KeyContext& ctx) {
  std::string kind = j.at("kind");
  if (kind == "poly")
    return Evaluator::from_poly(Poly(ctx.dom, j.at("coeffs").get<std::vector<u64>>()));
  if (kind == "expr")
    return Evaluator::from_expr(expr_from_text(j.at("expr")), ctx.interp);
  return Evaluator::from_table(elemset_from(j.at("domain"), ctx),
                               j.at("values").get<std::vector<u64>>());
}

ordered_json bijection_json(const Bijection& b) {
  ordered_json j;
  j["domain"] = elemset_json(b.domain);
  j["forward"] = evaluator_json(b.forward);
  switch (b.inverse_kind) {
    case Bijection::InverseKind::closed_form: j["inverse_kind"] = "closed_form"; break;
    case Bijection::InverseKind::table: j["inverse_kind"] = "table"; break;
    case Bijection::InverseKind::hensel: j["inverse_kind"] = "hensel"; break;
  }
  if (b.inverse_kind == Bijection::InverseKind::hensel) {
    j["base_inverse"] = b.hensel_base_inverse;
    j["p"] = b.hensel_p;
    j["l"] = b.hensel_l;
  } else {
    j["inverse"] = evaluator_json(b.inverse);
  }
  return j;
}

Bijection bijection_from(const ordered_json& j, const KeyContext& ctx) {
  Bijection b;
  b.domain = elemset_from(j.at("domain"), ctx);
  b.forward = evaluator_from(j.at("forward"), ctx);
  std::string kind = j.at("inverse_kind");
  if (kind == "hensel") {
    b.inverse_kind = Bijection::InverseKind::hensel;
    b.hensel_base_inverse = j.at("base_inverse").get<std::vector<u64>>();
    b.hensel_p = j.at("p");
    b.hensel_l = j.at("l");
  } else {
    b.inverse_kind = kind == "table" ? Bijection::InverseKind::table
                                     : Bijection::InverseKind::closed_form;
    b.inverse = evaluator_from(j.at("inverse"), ctx);
  }
  return b;
}

ordered_json param_map_json(const ParamUnivariateMap& m) {
  ordered_json j;
  j["kind"] = m.kind == ParamUnivariateMap::Kind::mult_power ? "mult" : "affine";
  j["params"] = m.param_count;
  j["scale"] = expr_to_text(m.scale);
  j["second"] = expr_to_text(m.second);
  return j;
}

ParamUnivariateMap param_map_from(const ordered_json& j, const KeyContext& ctx) {
  u32 params = j.at("params");
  Expr scale = expr_from_text(j.at("scale"));
  Expr second = expr_from_text(j.at("second"));
  if (j.at("kind") == "mult")
    return multiplicative_param_map(ctx.dom, params, std::move(scale), std::move(second));
  return affine_param_map(ctx.dom, params, std::move(scale), std::move(second));
}

ordered_json partition_json(const PartitionOfUnity& p) {
  ordered_json j;
  j["arity"] = p.arity;
  std::vector<std::string> inds;
  for (const Expr& e : p.indicators) inds.push_back(expr_to_text(e));
  j["indicators"] = inds;
  ordered_json reps = ordered_json::array();
  for (const auto& r : p.reps)
    reps.push_back(r ? ordered_json(*r) : ordered_json(nullptr));
  j["reps"] = reps;
  j["discriminator"] = p.discriminator.valid() ? expr_to_text(p.discriminator) : "";
  return j;
}

PartitionOfUnity partition_from(const ordered_json& j, const KeyContext& ctx) {
  PartitionOfUnity p;
  p.dom = ctx.dom;
  p.arity = j.at("arity");
  for (const auto& t : j.at("indicators")) p.indicators.push_back(expr_from_text(t));
  for (const auto& r : j.at("reps"))
    p.reps.push_back(r.is_null() ? std::optional<u64>() : std::optional<u64>(r.get<u64>()));
  std::string disc = j.at("discriminator");
  if (!disc.empty()) p.discriminator = expr_from_text(disc);
  p.interp = ctx.interp;
  return p;
}

ordered_json matrix_json(const ParametricMatrix& m) {
  ordered_json j;
  j["dim"] = m.dim();
  j["params"] = m.param_count();
  ordered_json factors = ordered_json::array();
  for (const auto& f : m.factors()) {
    ordered_json fj;
    if (const auto* p = std::get_if<ParametricMatrix::PermutationFactor>(&f)) {
      fj["kind"] = "perm";
      fj["partition"] = partition_json(p->part);
      fj["sigma"] = p->sigma.table;
    } else if (const auto* d = std::get_if<ParametricMatrix::DiagonalFactor>(&f)) {
      fj["kind"] = "diag";
      std::vector<std::string> entries;
      for (const Expr& e : d->entries) entries.push_back(expr_to_text(e));
      fj["entries"] = entries;
    } else {
      const auto& t = std::get<ParametricMatrix::TriangularFactor>(f);
      fj["kind"] = t.lower ? "lower" : "upper";
      std::vector<std::vector<std::string>> entries;
      for (const auto& row : t.entries) {
        std::vector<std::string> r;
        for (const Expr& e : row) r.push_back(expr_to_text(e));
        entries.push_back(std::move(r));
      }
      fj["entries"] = entries;
    }
    factors.push_back(std::move(fj));
  }
  j["factors"] = factors;
  return j;
}

ParametricMatrix matrix_from(const ordered_json& j, const KeyContext& ctx) {
  u32 dim = j.at("dim");
  u32 params = j.at("params");
  std::vector<ParametricMatrix::Factor> factors;
  for (const auto& fj : j.at("factors")) {
    std::string kind = fj.at("kind");
    if (kind == "perm") {
      IndexMap sigma;
      sigma.table = fj.at("sigma").get<std::vector<std::vector<u64>>>();
      sigma.audit();
      factors.push_back(ParametricMatrix::PermutationFactor{
          partition_from(fj.at("partition"), ctx), std::move(sigma)});
    } else if (kind == "diag") {
      ParametricMatrix::DiagonalFactor d;
      for (const auto& t : fj.at("entries")) d.entries.push_back(expr_from_text(t));
      factors.push_back(std::move(d));
    } else {
      ParametricMatrix::TriangularFactor t;
      t.lower = kind == "lower";
      for (const auto& row : fj.at("entries")) {
        std::vector<Expr> r;
        for (const auto& e : row) r.push_back(expr_from_text(e));
        t.entries.push_back(std::move(r));
      }
      factors.push_back(std::move(t));
    }
  }
  return ParametricMatrix(ctx.dom, dim, params, std::move(factors), ctx.interp);
}

ordered_json injection_json(const ParametricInjection& inj) {
  ordered_json j;
  j["input_set"] = elemset_json(inj.input_set());
  j["param_set"] = elemset_json(inj.param_set());
  j["l"] = inj.param_arity();
  j["m"] = inj.input_arity();
  j["partition"] = partition_json(inj.partition());
  ordered_json branches = ordered_json::array();
  for (const ClassBranch& b : inj.branches()) {
    ordered_json bj;
    bj["live"] = b.live;
    if (b.live) {
      bj["phi"] = matrix_json(b.phi);
      std::vector<std::string> chi;
      for (const Expr& e : b.chi) chi.push_back(expr_to_text(e));
      bj["chi"] = chi;
      ordered_json zeta = ordered_json::array();
      for (const auto& zm : b.zeta) zeta.push_back(param_map_json(zm));
      bj["zeta"] = zeta;
    } else {
      std::vector<std::string> outs;
      for (const Expr& e : b.dead_outputs) outs.push_back(expr_to_text(e));
      bj["outputs"] = outs;
    }
    branches.push_back(std::move(bj));
  }
  j["branches"] = branches;
  return j;
}

ParametricInjection injection_from(const ordered_json& j, const KeyContext& ctx) {
  std::vector<ClassBranch> branches;
  for (const auto& bj : j.at("branches")) {
    ClassBranch b;
    b.live = bj.at("live");
    if (b.live) {
      b.phi = matrix_from(bj.at("phi"), ctx);
      for (const auto& t : bj.at("chi")) b.chi.push_back(expr_from_text(t));
      for (const auto& zj : bj.at("zeta")) b.zeta.push_back(param_map_from(zj, ctx));
    } else {
      for (const auto& t : bj.at("outputs")) b.dead_outputs.push_back(expr_from_text(t));
    }
    branches.push_back(std::move(b));
  }
  return ParametricInjection(ctx.dom, elemset_from(j.at("input_set"), ctx),
                             elemset_from(j.at("param_set"), ctx), j.at("l"), j.at("m"),
                             partition_from(j.at("partition"), ctx), std::move(branches));
}

ordered_json triangular_json(const TriangularMap& t) {
  ordered_json j;
  j["gset"] = elemset_json(t.gset);
  j["m"] = t.m;
  ordered_json f = ordered_json::array(), g = ordered_json::array(),
               h = ordered_json::array();
  for (const auto& b : t.f) f.push_back(bijection_json(b));
  for (const auto& b : t.g) g.push_back(bijection_json(b));
  for (const auto& pm : t.h) h.push_back(param_map_json(pm));
  j["f"] = f;
  j["g"] = g;
  j["h"] = h;
  return j;
}

TriangularMap triangular_from(const ordered_json& j, const KeyContext& ctx) {
  TriangularMap t;
  t.dom = ctx.dom;
  t.gset = elemset_from(j.at("gset"), ctx);
  t.m = j.at("m");
  for (const auto& b : j.at("f")) t.f.push_back(bijection_from(b, ctx));
  for (const auto& b : j.at("g")) t.g.push_back(bijection_from(b, ctx));
  for (const auto& pm : j.at("h")) t.h.push_back(param_map_from(pm, ctx));
  return t;
}

std::vector<std::string> expr_list_json(const std::vector<Expr>& exprs) {
  std::vector<std::string> out;
  for (const Expr& e : exprs) out.push_back(expr_to_text(e));
  return out;
}

std::vector<Expr> expr_list_from(const ordered_json& j) {
  std::vector<Expr> out;
  for (const auto& t : j) out.push_back(expr_from_text(t));
  return out;
}

Section header_section(const SchemeParams& params, const Domain& dom) {
  ordered_json j;
  j["params"] = params_json(params);
  j["domain"] = domain_json(dom);
  return Section{"header", j.dump()};
}

KeyContext context_from_header(const KeyFileContent& content) {
  const Section* header = content.find("header");
  if (!header) throw RejectionError("key file has no header");
  ordered_json j = ordered_json::parse(header->body);
  KeyContext ctx;
  ctx.dom = domain_from(j.at("domain"));
  ctx.interp = std::make_shared<Interpretation>(Interpretation::make(ctx.dom));
  return ctx;
}

SchemeParams header_params(const KeyFileContent& content) {
  const Section* header = content.find("header");
  if (!header) throw RejectionError("key file has no header");
  return params_from(ordered_json::parse(header->body).at("params"));
}

const Section& need_section(const KeyFileContent& content, const std::string& name) {
  const Section* s = content.find(name);
  if (!s) {
    if (name == "private") throw RejectionError("no private section");
    throw RejectionError("no " + name + " section");
  }
  return *s;
}

}  // namespace

std::vector<u8> emit_pkc_public(const PkcPublicKey& key) {
  KeyFileContent content;
  content.kind = "pkc-public";
  content.sections.push_back(header_section(key.params, key.dom));
  ordered_json j;
  j["table"] = key.table;
  content.sections.push_back(Section{"public", j.dump()});
  return key_file_emit(content);
}

std::vector<u8> emit_pkc_private(const PkcKeyPair& pair) {
  KeyFileContent content;
  content.kind = "pkc-private";
  content.sections.push_back(header_section(pair.priv.params, pair.priv.dom));
  ordered_json j;
  j["P"] = triangular_json(pair.priv.P);
  j["hidden"] = expr_list_json(pair.priv.hidden);
  j["table"] = pair.pub.table;
  content.sections.push_back(Section{"private", j.dump()});
  return key_file_emit(content);
}

std::vector<u8> emit_sig_verification(const SigPublicKey& key) {
  KeyFileContent content;
  content.kind = "sig-verification";
  content.sections.push_back(header_section(key.params, key.dom));
  ordered_json j;
  j["plain_table"] = key.plain_table;
  content.sections.push_back(Section{"public", j.dump()});
  return key_file_emit(content);
}

std::vector<u8> emit_sig_authentication(const SigAuthTable& table) {
  KeyFileContent content;
  content.kind = "sig-authentication";
  content.sections.push_back(header_section(table.params, table.dom));
  ordered_json j;
  j["p_full"] = table.p_full;
  j["f_table"] = table.f_table;
  j["q_table"] = table.q_table;
  j["r_table"] = table.r_table;
  j["h_table"] = table.h_table;
  content.sections.push_back(Section{"authentication", j.dump()});
  return key_file_emit(content);
}

std::vector<u8> emit_sig_private(const SigKeySet& keys) {
  KeyFileContent content;
  content.kind = "sig-private";
  content.sections.push_back(header_section(keys.priv.params, keys.priv.dom));
  ordered_json j;
  j["P"] = injection_json(keys.priv.P);
  j["Q"] = injection_json(keys.priv.Q);
  j["R"] = injection_json(keys.priv.R);
  j["H"] = triangular_json(keys.priv.H);
  j["hidden"] = expr_list_json(keys.priv.hidden);
  content.sections.push_back(Section{"private", j.dump()});
  // the private file carries the registered tables for self-contained use
  ordered_json a;
  a["p_full"] = keys.auth.p_full;
  a["f_table"] = keys.auth.f_table;
  a["q_table"] = keys.auth.q_table;
  a["r_table"] = keys.auth.r_table;
  a["h_table"] = keys.auth.h_table;
  content.sections.push_back(Section{"authentication", a.dump()});
  ordered_json v;
  v["plain_table"] = keys.pub.plain_table;
  content.sections.push_back(Section{"public", v.dump()});
  return key_file_emit(content);
}

PkcPublicKey parse_pkc_public(std::span<const u8> bytes) {
  KeyFileContent content = key_file_parse(bytes);
  if (content.kind != "pkc-public" && content.kind != "pkc-private")
    throw RejectionError("key kind mismatch");
  KeyContext ctx = context_from_header(content);
  PkcPublicKey key;
  key.params = header_params(content);
  key.dom = ctx.dom;
  if (content.kind == "pkc-public") {
    ordered_json j = ordered_json::parse(need_section(content, "public").body);
    key.table = j.at("table").get<std::vector<u64>>();
  } else {
    ordered_json j = ordered_json::parse(need_section(content, "private").body);
    key.table = j.at("table").get<std::vector<u64>>();
  }
  return key;
}

PkcPrivateKey parse_pkc_private(std::span<const u8> bytes) {
  KeyFileContent content = key_file_parse(bytes);
  if (content.kind.rfind("pkc-", 0) != 0) throw RejectionError("key kind mismatch");
  KeyContext ctx = context_from_header(content);
  ordered_json j = ordered_json::parse(need_section(content, "private").body);
  PkcPrivateKey key;
  key.params = header_params(content);
  key.dom = ctx.dom;
  key.P = triangular_from(j.at("P"), ctx);
  key.hidden = expr_list_from(j.at("hidden"));
  key.interp = ctx.interp;
  return key;
}

SigPublicKey parse_sig_verification(std::span<const u8> bytes) {
  KeyFileContent content = key_file_parse(bytes);
  if (content.kind != "sig-verification" && content.kind != "sig-private")
    throw RejectionError("key kind mismatch");
  KeyContext ctx = context_from_header(content);
  ordered_json j = ordered_json::parse(need_section(content, "public").body);
  SigPublicKey key;
  key.params = header_params(content);
  key.dom = ctx.dom;
  key.plain_table = j.at("plain_table").get<std::vector<u64>>();
  return key;
}

SigAuthTable parse_sig_authentication(std::span<const u8> bytes) {
  KeyFileContent content = key_file_parse(bytes);
  if (content.kind != "sig-authentication" && content.kind != "sig-private")
    throw RejectionError("key kind mismatch");
  KeyContext ctx = context_from_header(content);
  ordered_json j = ordered_json::parse(need_section(content, "authentication").body);
  SigAuthTable table;
  table.params = header_params(content);
  table.dom = ctx.dom;
  table.p_full = j.at("p_full").get<std::vector<u64>>();
  table.f_table = j.at("f_table").get<std::vector<u64>>();
  table.q_table = j.at("q_table").get<std::vector<u64>>();
  table.r_table = j.at("r_table").get<std::vector<u64>>();
  table.h_table = j.at("h_table").get<std::vector<u64>>();
  return table;
}

SigKeySet parse_sig_private(std::span<const u8> bytes) {
  KeyFileContent content = key_file_parse(bytes);
  if (content.kind.rfind("sig-", 0) != 0) throw RejectionError("key kind mismatch");
  KeyContext ctx = context_from_header(content);
  ordered_json j = ordered_json::parse(need_section(content, "private").body);
  SigKeySet keys;
  keys.priv.params = header_params(content);
  keys.priv.dom = ctx.dom;
  keys.priv.P = injection_from(j.at("P"), ctx);
  keys.priv.Q = injection_from(j.at("Q"), ctx);
  keys.priv.R = injection_from(j.at("R"), ctx);
  keys.priv.H = triangular_from(j.at("H"), ctx);
  keys.priv.hidden = expr_list_from(j.at("hidden"));
  keys.priv.interp = ctx.interp;
  keys.auth = parse_sig_authentication(bytes);
  keys.pub = parse_sig_verification(bytes);
  return keys;
}

std::string emit_message(std::span<const u64> elements) {
  std::string out;
  for (size_t i = 0; i < elements.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(elements[i]);
  }
  out += "\n";
  return out;
}

std::vector<u64> parse_message(const std::string& text) {
  std::vector<u64> out;
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\n' ||
                                 text[pos] == '\t' || text[pos] == '\r' ||
                                 text[pos] == ','))
      ++pos;
    if (pos >= text.size()) break;
    size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (start == pos) throw EvalError("message element is not a decimal integer");
    out.push_back(std::stoull(text.substr(start, pos - start)));
  }
  return out;
}

std::string emit_claim(const SigClaim& claim) {
  ordered_json j;
  j["eps"] = claim.eps;
  j["z"] = claim.z;
  j["delta"] = claim.delta;
  j["x"] = claim.x;
  j["omega"] = claim.omega;
  j["txn"] = claim.txn_id;
  return j.dump();
}

SigClaim parse_claim(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  SigClaim claim;
  claim.eps = j.at("eps").get<std::vector<u64>>();
  claim.z = j.at("z").get<std::vector<u64>>();
  claim.delta = j.at("delta").get<std::vector<u64>>();
  claim.x = j.at("x").get<std::vector<u64>>();
  claim.omega = j.at("omega").get<std::vector<u64>>();
  claim.txn_id = j.at("txn");
  return claim;
}

std::string emit_sig_message(const SigMessage& sig) {
  ordered_json j;
  j["eps"] = sig.eps;
  j["z"] = sig.z;
  j["delta"] = sig.delta;
  j["omega"] = sig.omega;
  j["txn"] = sig.txn_id;
  return j.dump();
}

SigMessage parse_sig_message(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  SigMessage sig;
  sig.eps = j.at("eps").get<std::vector<u64>>();
  sig.z = j.at("z").get<std::vector<u64>>();
  sig.delta = j.at("delta").get<std::vector<u64>>();
  sig.omega = j.at("omega").get<std::vector<u64>>();
  sig.txn_id = j.at("txn");
  return sig;
}

}  // namespace mpkc::keyio
