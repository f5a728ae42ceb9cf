#include "io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace ktr {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

using json = nlohmann::json;

namespace {

constexpr char kMagic[4] = {'K', 'T', 'C', '\n'};

const char *dtype_name(Dtype dt) { return dt == Dtype::c64 ? "c64" : "c128"; }

void pack_complex(const std::vector<cplx> &v, Dtype dt, std::vector<std::uint8_t> &out) {
  if (dt == Dtype::c128) {
    out.resize(v.size() * 16);
    std::memcpy(out.data(), v.data(), out.size());
  } else {
    out.resize(v.size() * 8);
    float *p = reinterpret_cast<float *>(out.data());
    for (std::size_t i = 0; i < v.size(); ++i) {
      p[2 * i] = float(v[i].real());
      p[2 * i + 1] = float(v[i].imag());
    }
  }
}

void unpack_complex(const std::uint8_t *payload, std::size_t len, Dtype dt, std::size_t count,
                    std::vector<cplx> &out) {
  std::size_t need = count * (dt == Dtype::c128 ? 16 : 8);
  if (len != need)
    fail_io("container: payload size does not match shape");
  out.resize(count);
  if (dt == Dtype::c128) {
    std::memcpy(out.data(), payload, len);
  } else {
    const float *p = reinterpret_cast<const float *>(payload);
    for (std::size_t i = 0; i < count; ++i)
      out[i] = cplx(double(p[2 * i]), double(p[2 * i + 1]));
  }
}

std::vector<long long> get_shape(const json &h, std::size_t rank) {
  if (!h.contains("shape") || !h["shape"].is_array() || h["shape"].size() != rank)
    fail_io("container: bad shape");
  std::vector<long long> s;
  for (const auto &e : h["shape"]) {
    if (!e.is_number_integer() || e.get<long long>() < 1)
      fail_io("container: bad shape");
    s.push_back(e.get<long long>());
  }
  return s;
}

Dtype get_dtype(const json &h) {
  std::string d = h.value("dtype", "");
  if (d == "c64")
    return Dtype::c64;
  if (d == "c128")
    return Dtype::c128;
  fail_io("container: unsupported dtype '" + d + "'");
}

} // namespace

const char *kind_name(const Artifact &a) {
  switch (a.value.index()) {
  case 0:
    return "image";
  case 1:
    return "kspace";
  case 2:
    return "maps";
  case 3:
    return "mask";
  default:
    return "kernel";
  }
}

FlatBuffer to_buffer(const Artifact &a, Dtype dt) {
  json h;
  h["kind"] = kind_name(a);
  h["byte_order"] = "little";
  FlatBuffer fb;

  std::visit(
      [&](const auto &v) {
        using T = std::decay_t<decltype(v)>;
        validate(v);
        if constexpr (std::is_same_v<T, ImageSeries>) {
          h["shape"] = {v.t, v.ny, v.nx};
          h["dtype"] = dtype_name(dt);
          pack_complex(v.data, dt, fb.payload);
        } else if constexpr (std::is_same_v<T, KSpaceSeries>) {
          h["shape"] = {v.nc, v.t, v.ny, v.nx};
          h["dtype"] = dtype_name(dt);
          pack_complex(v.data, dt, fb.payload);
        } else if constexpr (std::is_same_v<T, SensitivityMaps>) {
          h["shape"] = {v.nc, v.ny, v.nx};
          h["dtype"] = dtype_name(dt);
          pack_complex(v.data, dt, fb.payload);
        } else if constexpr (std::is_same_v<T, SamplingMask>) {
          h["shape"] = {v.t, v.ny};
          h["dtype"] = "u8";
          h["acs"] = {v.acs_lo, v.acs_hi};
          h["acceleration"] = v.acceleration;
          fb.payload.assign(v.lines.begin(), v.lines.end());
        } else {
          h["shape"] = {v.nc, v.nc, v.dt, v.dky, v.dkx};
          h["dtype"] = dtype_name(dt);
          h["tikhonov"] = v.tikhonov;
          pack_complex(v.w, dt, fb.payload);
        }
      },
      a.value);

  if (!a.meta.empty())
    h["meta"] = a.meta;
  fb.header = h.dump();
  return fb;
}

Artifact from_buffer(const std::string &header, const std::uint8_t *payload, std::size_t len) {
  json h = json::parse(header, nullptr, false);
  if (h.is_discarded() || !h.is_object())
    fail_io("container: header is not valid JSON");
  if (h.value("byte_order", "") != "little")
    fail_io("container: unsupported byte order");
  std::string kind = h.value("kind", "");

  static const char *known[] = {"kind", "byte_order", "shape", "dtype", "acs", "acceleration",
                                "tikhonov", "meta"};
  for (auto it = h.begin(); it != h.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char *k) { return it.key() == k; }) == std::end(known))
      fail_io("container: unknown header field '" + it.key() + "'");
  }

  Artifact a;
  if (kind == "image") {
    auto s = get_shape(h, 3);
    ImageSeries v;
    v.t = int(s[0]);
    v.ny = int(s[1]);
    v.nx = int(s[2]);
    unpack_complex(payload, len, get_dtype(h), v.numel(), v.data);
    validate(v);
    a.value = std::move(v);
  } else if (kind == "kspace") {
    auto s = get_shape(h, 4);
    KSpaceSeries v;
    v.nc = int(s[0]);
    v.t = int(s[1]);
    v.ny = int(s[2]);
    v.nx = int(s[3]);
    unpack_complex(payload, len, get_dtype(h), v.numel(), v.data);
    validate(v);
    a.value = std::move(v);
  } else if (kind == "maps") {
    auto s = get_shape(h, 3);
    SensitivityMaps v;
    v.nc = int(s[0]);
    v.ny = int(s[1]);
    v.nx = int(s[2]);
    unpack_complex(payload, len, get_dtype(h), v.numel(), v.data);
    validate(v);
    a.value = std::move(v);
  } else if (kind == "mask") {
    auto s = get_shape(h, 2);
    SamplingMask v;
    v.t = int(s[0]);
    v.ny = int(s[1]);
    if (h.value("dtype", "") != "u8")
      fail_io("container: mask payload must be u8");
    if (len != std::size_t(v.t) * v.ny)
      fail_io("container: payload size does not match shape");
    v.lines.assign(payload, payload + len);
    if (h.contains("acs")) {
      if (!h["acs"].is_array() || h["acs"].size() != 2)
        fail_io("container: bad acs range");
      v.acs_lo = h["acs"][0].get<int>();
      v.acs_hi = h["acs"][1].get<int>();
    }
    v.acceleration = h.value("acceleration", 0);
    validate(v);
    a.value = std::move(v);
  } else if (kind == "kernel") {
    auto s = get_shape(h, 5);
    if (s[0] != s[1])
      fail_io("container: kernel coil dims must agree");
    KtKernel v;
    v.nc = int(s[0]);
    v.dt = int(s[2]);
    v.dky = int(s[3]);
    v.dkx = int(s[4]);
    v.tikhonov = h.value("tikhonov", 0.0);
    unpack_complex(payload, len, get_dtype(h), v.numel(), v.w);
    validate(v);
    a.value = std::move(v);
  } else {
    fail_io("container: unknown kind '" + kind + "'");
  }

  if (h.contains("meta")) {
    if (!h["meta"].is_object())
      fail_io("container: meta must be an object of strings");
    for (auto it = h["meta"].begin(); it != h["meta"].end(); ++it) {
      if (!it.value().is_string())
        fail_io("container: meta must be an object of strings");
      a.meta[it.key()] = it.value().get<std::string>();
    }
  }
  return a;
}

void write_ktc(const std::string &path, const Artifact &a, Dtype dt) {
  FlatBuffer fb = to_buffer(a, dt);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    fail_io("cannot open '" + path + "' for writing");
  std::uint64_t hlen = fb.header.size();
  f.write(kMagic, 4);
  f.write(reinterpret_cast<const char *>(&hlen), 8);
  f.write(fb.header.data(), std::streamsize(fb.header.size()));
  if (!fb.payload.empty())
    f.write(reinterpret_cast<const char *>(fb.payload.data()), std::streamsize(fb.payload.size()));
  if (!f)
    fail_io("write failed for '" + path + "'");
}

Artifact read_ktc(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    fail_io("cannot open '" + path + "'");
  char magic[4];
  std::uint64_t hlen = 0;
  f.read(magic, 4);
  f.read(reinterpret_cast<char *>(&hlen), 8);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    fail_io("'" + path + "' is not a ktc container");
  if (hlen > (1u << 20))
    fail_io("'" + path + "': header too large");
  std::string header(hlen, '\0');
  f.read(header.data(), std::streamsize(hlen));
  if (!f)
    fail_io("'" + path + "': truncated header");
  std::vector<std::uint8_t> payload((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
  return from_buffer(header, payload.data(), payload.size());
}

void write_pgm(const std::string &path, const double *frame, int ny, int nx, double scale_max) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    fail_io("cannot open '" + path + "' for writing");
  char head[128];
  std::snprintf(head, sizeof(head), "P5\n# max=%.12g\n%d %d\n255\n", scale_max, nx, ny);
  f << head;
  std::vector<std::uint8_t> row(std::size_t(nx), 0);
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      double v = scale_max > 0.0 ? frame[std::size_t(y) * nx + x] / scale_max : 0.0;
      v = std::clamp(v, 0.0, 1.0);
      row[std::size_t(x)] = std::uint8_t(std::lround(v * 255.0));
    }
    f.write(reinterpret_cast<const char *>(row.data()), nx);
  }
  if (!f)
    fail_io("write failed for '" + path + "'");
}

} // namespace ktr
