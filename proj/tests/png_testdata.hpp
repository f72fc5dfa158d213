#pragma once

#include <cstdint>
#include <vector>

// Frozen PNG byte streams used by the image loader tests. Pixel patterns:
//   white_gray8:    8x8  color type 0, all samples 255
//   white_rgb8:     8x8  color type 2, all (255,255,255)
//   gradient_rgb16: 16x16 color type 2, r=x*16, g=y*16, b=(x+y)*8
//   palette4:       4x4  color type 3, palette {red,green,blue,gray128}, index (x+y)%4
//   grayalpha6x5:   6x5  color type 4, gray = 10*(x+1)+y, alpha 200
namespace pngdata {

inline const std::vector<uint8_t> white_gray8 = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
    0x00, 0x00, 0x00, 0x08, 0x00, 0x00, 0x00, 0x08, 0x08, 0x00, 0x00, 0x00, 0x00, 0xe1, 0x64, 0xe1,
    0x57, 0x00, 0x00, 0x00, 0x0e, 0x49, 0x44, 0x41, 0x54, 0x78, 0xda, 0x63, 0xf8, 0x0f, 0x05, 0x0c,
    0x94, 0x31, 0x00, 0xf7, 0xc0, 0x3f, 0xc1, 0xaf, 0x5c, 0x0f, 0xcd, 0x00, 0x00, 0x00, 0x00, 0x49,
    0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

inline const std::vector<uint8_t> white_rgb8 = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
    0x00, 0x00, 0x00, 0x08, 0x00, 0x00, 0x00, 0x08, 0x08, 0x02, 0x00, 0x00, 0x00, 0x4b, 0x6d, 0x29,
    0xdc, 0x00, 0x00, 0x00, 0x0f, 0x49, 0x44, 0x41, 0x54, 0x78, 0xda, 0x63, 0xf8, 0x8f, 0x03, 0x30,
    0x0c, 0x2d, 0x09, 0x00, 0xba, 0x1e, 0xbf, 0x41, 0x89, 0xe8, 0xb6, 0xbb, 0x00, 0x00, 0x00, 0x00,
    0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

inline const std::vector<uint8_t> gradient_rgb16 = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
    0x00, 0x00, 0x00, 0x10, 0x00, 0x00, 0x00, 0x10, 0x08, 0x02, 0x00, 0x00, 0x00, 0x90, 0x91, 0x68,
    0x36, 0x00, 0x00, 0x01, 0xf5, 0x49, 0x44, 0x41, 0x54, 0x78, 0xda, 0x0d, 0xca, 0x91, 0xa2, 0xec,
    0x40, 0x0c, 0x00, 0xd0, 0xe0, 0xc5, 0xc1, 0xc5, 0xc1, 0xc5, 0x60, 0x31, 0x58, 0x0c, 0x16, 0x83,
    0xc5, 0x60, 0x31, 0x58, 0x0c, 0x16, 0x83, 0xc5, 0xe0, 0xe2, 0xe0, 0xe2, 0xe0, 0xe2, 0xe0, 0xc3,
    0xf9, 0x84, 0xd7, 0xc3, 0x07, 0x00, 0xa0, 0xc0, 0x5f, 0x85, 0x82, 0xf0, 0x22, 0xa8, 0x0c, 0x6f,
    0x01, 0x54, 0x58, 0x0c, 0xc8, 0x61, 0x0d, 0xe0, 0x84, 0xad, 0x81, 0x74, 0xd8, 0x07, 0xe8, 0x84,
    0xe3, 0xe9, 0x7f, 0xa5, 0x94, 0x5a, 0x5e, 0x58, 0x2a, 0x95, 0x37, 0x17, 0x94, 0xb2, 0x68, 0x21,
    0x2b, 0xab, 0x17, 0x8e, 0xb2, 0x65, 0x91, 0x56, 0xf6, 0x5e, 0x74, 0x94, 0x63, 0x16, 0x03, 0xa8,
    0x4f, 0x7f, 0xd5, 0x5a, 0xb1, 0xbe, 0xa9, 0x22, 0xd7, 0x45, 0x2a, 0x69, 0x5d, 0xad, 0xb2, 0xd7,
    0x2d, 0xaa, 0x64, 0xdd, 0x5b, 0xd5, 0x5e, 0x8f, 0x51, 0x6d, 0xd6, 0x13, 0x00, 0x5f, 0x05, 0x9f,
    0xfe, 0x46, 0x44, 0xc2, 0x85, 0x91, 0x04, 0x57, 0x45, 0x36, 0xdc, 0x1c, 0x25, 0x70, 0x4f, 0xd4,
    0x86, 0x47, 0x47, 0x1b, 0x78, 0x4e, 0x74, 0x00, 0xaa, 0x85, 0xde, 0x95, 0x9e, 0xbe, 0x10, 0x11,
    0xd3, 0x2a, 0xc4, 0x4a, 0x9b, 0x91, 0x38, 0xed, 0x41, 0x9a, 0x74, 0x34, 0xb2, 0x4e, 0xe7, 0x20,
    0x9f, 0x74, 0x01, 0xf0, 0xbb, 0x30, 0x56, 0x5e, 0x90, 0x9f, 0xbe, 0x32, 0xb3, 0xf0, 0xa6, 0x2c,
    0xc6, 0xbb, 0xb3, 0x06, 0x1f, 0xc9, 0xd6, 0xf8, 0xec, 0xec, 0x83, 0xaf, 0xc9, 0x01, 0x20, 0x58,
    0x64, 0xa9, 0x42, 0x28, 0x2b, 0xc9, 0xd3, 0x37, 0x11, 0x51, 0xd9, 0x4d, 0xd4, 0xe5, 0x08, 0xb1,
    0x94, 0xb3, 0x89, 0x77, 0xb9, 0x86, 0xc4, 0x94, 0x1b, 0x40, 0x97, 0xa2, 0x54, 0x75, 0x45, 0x65,
    0xd2, 0x8d, 0xf5, 0xe9, 0xbb, 0xaa, 0x9a, 0x1e, 0xae, 0x16, 0x7a, 0xa6, 0x7a, 0xd3, 0xab, 0x6b,
    0x0c, 0xbd, 0xa7, 0x26, 0x80, 0x51, 0xb1, 0xb5, 0x1a, 0xa3, 0x6d, 0x64, 0xc2, 0xb6, 0x8b, 0x3d,
    0xfd, 0x30, 0x33, 0xb7, 0x33, 0xcc, 0xd3, 0xae, 0x66, 0xd1, 0xed, 0x1e, 0x96, 0xd3, 0x3e, 0x00,
    0xbe, 0x16, 0xe7, 0xea, 0x1b, 0xba, 0x90, 0xef, 0xec, 0x2a, 0x7e, 0xa8, 0x3f, 0xfd, 0x74, 0xf7,
    0xf0, 0x2b, 0x3d, 0x9a, 0xdf, 0xdd, 0x73, 0xf8, 0x67, 0x7a, 0x03, 0x08, 0x2e, 0xb1, 0xd5, 0x10,
    0x8c, 0x9d, 0x42, 0x39, 0x0e, 0x09, 0xd3, 0x38, 0x2d, 0x9e, 0x7e, 0x45, 0x44, 0xc6, 0xdd, 0x22,
    0x7b, 0x7c, 0x46, 0xb4, 0x19, 0x5f, 0x80, 0xdc, 0x4a, 0x4a, 0xcd, 0x1d, 0x53, 0x29, 0x0f, 0x4e,
    0x93, 0x3c, 0x35, 0xdd, 0xf2, 0xf2, 0x7c, 0xfa, 0x9d, 0x99, 0x2d, 0x3f, 0x3d, 0xdb, 0xc8, 0xef,
    0xcc, 0x0e, 0xd0, 0xa4, 0xb4, 0xbd, 0x36, 0xc5, 0x76, 0x50, 0x33, 0x6e, 0xa7, 0x34, 0xd7, 0x76,
    0x59, 0x0b, 0x6f, 0x77, 0xb4, 0xa7, 0x7f, 0x5a, 0x6b, 0xbd, 0x7d, 0x47, 0xeb, 0xb3, 0xfd, 0x00,
    0xfa, 0x5e, 0xba, 0xd6, 0x7e, 0x60, 0x37, 0xea, 0x27, 0x77, 0x97, 0x7e, 0x69, 0x0f, 0xeb, 0xb7,
    0xf7, 0x8c, 0xfe, 0xc9, 0xfe, 0xf4, 0x6f, 0xef, 0x7d, 0xf4, 0xdf, 0xec, 0x03, 0x60, 0x68, 0x19,
    0x47, 0x1d, 0x86, 0xe3, 0xa4, 0xe1, 0x3c, 0x2e, 0x19, 0xa1, 0xe3, 0xb6, 0x91, 0x3e, 0x3e, 0x31,
    0x5a, 0x8e, 0x6f, 0x1b, 0x4f, 0xff, 0x8d, 0x31, 0xe6, 0xf8, 0x07, 0x30, 0x8f, 0x32, 0xad, 0xce,
    0x13, 0xa7, 0xd3, 0xbc, 0x78, 0x86, 0xcc, 0x5b, 0x67, 0xda, 0xfc, 0xf8, 0x6c, 0x31, 0xbf, 0x39,
    0x7b, 0x9b, 0xbf, 0x3e, 0x9f, 0xfe, 0x6f, 0xce, 0xf9, 0x1f, 0xc5, 0x41, 0x68, 0x10, 0x11, 0x7f,
    0xd2, 0x89, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

inline const std::vector<uint8_t> palette4 = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
    0x00, 0x00, 0x00, 0x04, 0x00, 0x00, 0x00, 0x04, 0x08, 0x03, 0x00, 0x00, 0x00, 0x9e, 0x2f, 0x6e,
    0x4c, 0x00, 0x00, 0x00, 0x0c, 0x50, 0x4c, 0x54, 0x45, 0xff, 0x00, 0x00, 0x00, 0xff, 0x00, 0x00,
    0x00, 0xff, 0x80, 0x80, 0x80, 0xcc, 0xb0, 0x46, 0x0f, 0x00, 0x00, 0x00, 0x14, 0x49, 0x44, 0x41,
    0x54, 0x78, 0xda, 0x63, 0x60, 0x60, 0x64, 0x62, 0x06, 0x63, 0x06, 0x10, 0xcd, 0x00, 0x62, 0x03,
    0x00, 0x01, 0x04, 0x00, 0x19, 0x92, 0xaf, 0x76, 0xb7, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e,
    0x44, 0xae, 0x42, 0x60, 0x82};

inline const std::vector<uint8_t> grayalpha6x5 = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
    0x00, 0x00, 0x00, 0x06, 0x00, 0x00, 0x00, 0x05, 0x08, 0x04, 0x00, 0x00, 0x00, 0xcc, 0x51, 0x55,
    0x6d, 0x00, 0x00, 0x00, 0x3c, 0x49, 0x44, 0x41, 0x54, 0x78, 0xda, 0x05, 0xc1, 0x27, 0x02, 0x83,
    0x00, 0x10, 0x00, 0xb0, 0xd3, 0x2c, 0x55, 0x86, 0x02, 0x8a, 0xa2, 0x43, 0xb1, 0x14, 0xeb, 0xf9,
    0x79, 0x16, 0x49, 0x24, 0x5e, 0x5a, 0xa3, 0xc9, 0x2e, 0x52, 0xa5, 0xce, 0xc7, 0xec, 0x10, 0x99,
    0x4a, 0xef, 0x6b, 0x71, 0x8a, 0x5c, 0xed, 0xed, 0x67, 0x75, 0x89, 0x42, 0x63, 0xf0, 0xb7, 0xb9,
    0x3d, 0x73, 0xa2, 0x1b, 0xc7, 0x24, 0x86, 0x18, 0x0e, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e,
    0x44, 0xae, 0x42, 0x60, 0x82};

}  // namespace pngdata
