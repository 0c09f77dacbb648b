/* toy block cipher: 6 functions, 10 reachable call sites from Cipher */

typedef unsigned char u8;

static const u8 SBOX[16] = {
    0xc, 0x5, 0x6, 0xb, 0x9, 0x0, 0xa, 0xd,
    0x3, 0xe, 0xf, 0x8, 0x4, 0x7, 0x1, 0x2};

static void KeyExpansion(u8 round_key[32], const u8 key[16]) {
  int i;
  for (i = 0; i < 16; i++) {
    round_key[i] = key[i];
    round_key[16 + i] = (u8)(key[i] ^ 0x5a);
  }
}

static void AddRoundKey(u8 state[16], const u8 round_key[32], int round) {
  int i;
  for (i = 0; i < 16; i++) {
    state[i] ^= round_key[16 * round + i];
  }
}

static void SubBytes(u8 state[16]) {
  int i;
  for (i = 0; i < 16; i++) {
    state[i] = (u8)((SBOX[state[i] & 0xf] << 4) | SBOX[(state[i] >> 4) & 0xf]);
  }
}

static void ShiftRows(u8 state[16]) {
  int r, c;
  u8 tmp[16];
  for (r = 0; r < 4; r++) {
    for (c = 0; c < 4; c++) {
      tmp[4 * r + c] = state[4 * r + ((c + r) & 3)];
    }
  }
  for (r = 0; r < 16; r++) {
    state[r] = tmp[r];
  }
}

static void MixColumns(u8 state[16]) {
  int c;
  for (c = 0; c < 4; c++) {
    u8 a = state[4 * c + 0];
    u8 b = state[4 * c + 1];
    u8 d = state[4 * c + 2];
    u8 e = state[4 * c + 3];
    state[4 * c + 0] = (u8)(a ^ b);
    state[4 * c + 1] = (u8)(b ^ d);
    state[4 * c + 2] = (u8)(d ^ e);
    state[4 * c + 3] = (u8)(e ^ a);
  }
}

void Cipher(u8 state[16], const u8 key[16]) {
  u8 round_key[32];
  KeyExpansion(round_key, key);
  AddRoundKey(state, round_key, 0);
  SubBytes(state);
  ShiftRows(state);
  MixColumns(state);
  AddRoundKey(state, round_key, 1);
  SubBytes(state);
  ShiftRows(state);
  MixColumns(state);
  AddRoundKey(state, round_key, 0);
}
