# Generated by nnmig 0.1.0: pt/subc -> tf/seq
# pivot fnv1a64: e5d55cb6ceda28a5

import tensorflow as tf
from tensorflow import keras
from tensorflow.keras import layers

INPUT_SHAPE = (32, 32, 3)  # channel-last, batch excluded


def build_VGG16():
    return keras.Sequential([
        layers.Input(shape=INPUT_SHAPE),
        layers.ZeroPadding2D(padding=1, name='conv2d_pad'),
        layers.Conv2D(64, 3, activation='relu', name='conv2d'),
        layers.ZeroPadding2D(padding=1, name='conv2d_1_pad'),
        layers.Conv2D(64, 3, activation='relu', name='conv2d_1'),
        layers.MaxPooling2D(pool_size=2, name='maxpool2d'),
        layers.ZeroPadding2D(padding=1, name='conv2d_2_pad'),
        layers.Conv2D(128, 3, activation='relu', name='conv2d_2'),
        layers.ZeroPadding2D(padding=1, name='conv2d_3_pad'),
        layers.Conv2D(128, 3, activation='relu', name='conv2d_3'),
        layers.MaxPooling2D(pool_size=2, name='maxpool2d_1'),
        layers.ZeroPadding2D(padding=1, name='conv2d_4_pad'),
        layers.Conv2D(256, 3, activation='relu', name='conv2d_4'),
        layers.ZeroPadding2D(padding=1, name='conv2d_5_pad'),
        layers.Conv2D(256, 3, activation='relu', name='conv2d_5'),
        layers.ZeroPadding2D(padding=1, name='conv2d_6_pad'),
        layers.Conv2D(256, 3, activation='relu', name='conv2d_6'),
        layers.MaxPooling2D(pool_size=2, name='maxpool2d_2'),
        layers.ZeroPadding2D(padding=1, name='conv2d_7_pad'),
        layers.Conv2D(512, 3, activation='relu', name='conv2d_7'),
        layers.ZeroPadding2D(padding=1, name='conv2d_8_pad'),
        layers.Conv2D(512, 3, activation='relu', name='conv2d_8'),
        layers.ZeroPadding2D(padding=1, name='conv2d_9_pad'),
        layers.Conv2D(512, 3, activation='relu', name='conv2d_9'),
        layers.MaxPooling2D(pool_size=2, name='maxpool2d_3'),
        layers.ZeroPadding2D(padding=1, name='conv2d_10_pad'),
        layers.Conv2D(512, 3, activation='relu', name='conv2d_10'),
        layers.ZeroPadding2D(padding=1, name='conv2d_11_pad'),
        layers.Conv2D(512, 3, activation='relu', name='conv2d_11'),
        layers.ZeroPadding2D(padding=1, name='conv2d_12_pad'),
        layers.Conv2D(512, 3, activation='relu', name='conv2d_12'),
        layers.MaxPooling2D(pool_size=2, name='maxpool2d_4'),
        layers.Flatten(name='flatten'),
        layers.Dropout(0.5, name='dropout'),
        layers.Dense(512, activation='relu', name='linear'),
        layers.Dropout(0.5, name='dropout_1'),
        layers.Dense(512, activation='relu', name='linear_1'),
        layers.Dropout(0.5, name='dropout_2'),
        layers.Dense(10, name='linear_2'),
    ], name='VGG16')
